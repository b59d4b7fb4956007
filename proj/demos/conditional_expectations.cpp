// Exact conditional expectations on the 3-step affine nilsystem and a short numeric check.
#include <cstdio>
#include <iostream>

#include "sumdyn/sumdyn.hpp"

using namespace sumdyn;

int main() {
  A2Options opt;
  opt.N = 20'000;
  opt.M = 64;
  opt.threads = default_threads();
  auto r = appendix_a2_repro(opt);
  std::cout << to_json(r).dump(2) << '\n';
  return 0;
}
