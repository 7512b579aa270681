// One line per acceptance criterion; exit status 1 if a required one fails.
#include <cstring>
#include <iostream>

#include "tpssv/verify.hpp"

int main(int argc, char **argv) {
  tpssv::verify::Options opt;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0)
      opt.quick = true;
  const auto results = tpssv::verify::run_all(opt);
  for (const auto &r : results)
    std::cout << tpssv::verify::format_line(r) << "\n";
  return tpssv::verify::all_required_passed(results) ? 0 : 1;
}
