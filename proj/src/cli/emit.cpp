#include "bwp/cli/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace bwp::cli {

ordered_json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

ordered_json to_json(cplx z) { return ordered_json::array({num(z.real()), num(z.imag())}); }

ordered_json to_json(const ComplexPoint& p) {
  if (p.is_infinite()) return "inf";
  return to_json(p.value());
}

ordered_json to_json(const Disk& d) {
  ordered_json j;
  j["center"] = to_json(d.center);
  j["radius"] = num(d.radius);
  j["outer"] = d.outer;
  return j;
}

ordered_json to_json(const std::vector<double>& xs) {
  ordered_json a = ordered_json::array();
  for (double x : xs) a.push_back(num(x));
  return a;
}

ordered_json make_report(const std::string& command, std::uint64_t config_hash,
                         ordered_json results, ordered_json diagnostics) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(config_hash));
  ordered_json r;
  r["command"] = command;
  r["config_hash"] = hex;
  r["results"] = std::move(results);
  r["diagnostics"] = diagnostics.is_null() ? ordered_json::object() : std::move(diagnostics);
  return r;
}

void write_text(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << contents;
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

void write_json(const std::string& path, const ordered_json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

void Image::set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  const std::size_t k = (static_cast<std::size_t>(y) * width + x) * 3;
  rgb[k] = r;
  rgb[k + 1] = g;
  rgb[k + 2] = b;
}

std::string encode_ppm(const Image& image) {
  std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                    "\n255\n";
  out.append(reinterpret_cast<const char*>(image.rgb.data()), image.rgb.size());
  return out;
}

}  // namespace bwp::cli
