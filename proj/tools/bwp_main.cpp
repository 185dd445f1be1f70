#include "bwp/cli/commands.hpp"

int main(int argc, char** argv) { return bwp::cli::run(argc, argv); }
