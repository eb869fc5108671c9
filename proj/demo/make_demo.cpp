#include <iostream>

#include <CLI11.hpp>

#include "demo_data.hpp"

int main(int argc, char** argv) {
  CLI::App app{"write a synthetic input tree for every motionkit subcommand"};
  std::string out;
  std::uint64_t seed = 0;
  app.add_option("out", out, "directory to create")->required();
  app.add_option("--seed", seed, "seed (bench replay must use the same one)");
  CLI11_PARSE(app, argc, argv);
  try {
    motionkit::demo::write_demo(out, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "demo inputs written to " << out << "\n";
  return 0;
}
