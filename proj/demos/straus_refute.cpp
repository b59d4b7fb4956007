// Every small shift of a fixed B is refuted inside a Straus set despite its positive density.
#include <cstdio>

#include "sumdyn/sumdyn.hpp"

using namespace sumdyn;

int main() {
  StrausSpec spec({3, 11, 37, 101});
  SetSpec A = make_straus(spec);
  const std::uint64_t W = 100'000;
  std::printf("density on [1, %llu]: %.5f, lower bound %s\n", static_cast<unsigned long long>(W),
              to_double(window_density(A, W)), to_string(spec.density_bound()).c_str());

  FiniteNatSet B({1, 3, 7, 12, 20});
  auto refs = refute_fixed_B(A, spec, B, 4, 50, W);
  std::size_t refuted = 0;
  for (const auto& r : refs)
    if (r.method != "none") ++refuted;
  std::printf("B = {1, 3, 7, 12, 20}: %zu of %zu shifts t <= 50 refuted\n", refuted, refs.size());
  for (std::size_t i = 0; i < refs.size() && i < 5; ++i)
    if (refs[i].witness)
      std::printf("  t = %llu: sum(F) + t = %llu is outside A (%s)\n", static_cast<unsigned long long>(refs[i].t),
                  static_cast<unsigned long long>(refs[i].witness->sum), refs[i].method.c_str());
  return 0;
}
