#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "support.hpp"

#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

namespace testsupport {

bool regen_golden = false;

std::filesystem::path golden_dir() { return HDEF_GOLDEN_DIR; }

bool check_golden(const std::string& name, const std::string& actual) {
  const auto path = golden_dir() / name;
  if (regen_golden) {
    std::ofstream os(path, std::ios::binary);
    os << actual;
    std::cerr << "regenerated " << path << "\n";
    return static_cast<bool>(os);
  }
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    std::cerr << "missing golden file " << path << " (run with --regen-golden)\n";
    return false;
  }
  std::stringstream ss;
  ss << is.rdbuf();
  if (ss.str() != actual) {
    std::cerr << "golden mismatch: " << path << "\n";
    return false;
  }
  return true;
}

}  // namespace testsupport

int main(int argc, char** argv) {
  std::vector<char*> args;
  for (int i = 0; i < argc; ++i) {
    if (std::strcmp(argv[i], "--regen-golden") == 0) {
      testsupport::regen_golden = true;
    } else {
      args.push_back(argv[i]);
    }
  }
  doctest::Context ctx;
  ctx.applyCommandLine(static_cast<int>(args.size()), args.data());
  return ctx.run();
}
