#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bwp/moebius.hpp"

namespace bwp::cli {

using nlohmann::ordered_json;

// Non-finite doubles become the strings "inf", "-inf" and "nan".
ordered_json num(double x);
ordered_json to_json(cplx z);
ordered_json to_json(const ComplexPoint& p);
ordered_json to_json(const Disk& d);
ordered_json to_json(const std::vector<double>& xs);

// {command, config_hash, results, diagnostics}, hash as 16 hex digits.
ordered_json make_report(const std::string& command, std::uint64_t config_hash,
                         ordered_json results, ordered_json diagnostics);

// Writes to `path`, or to stdout when path is empty. Throws std::runtime_error
// naming the path on I/O failure.
void write_text(const std::string& path, const std::string& contents);
void write_json(const std::string& path, const ordered_json& doc);

// Binary P6 image, row-major RGB.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
  Image(int w, int h) : width(w), height(h), rgb(static_cast<std::size_t>(w) * h * 3, 0) {}
  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
};
std::string encode_ppm(const Image& image);

}  // namespace bwp::cli
