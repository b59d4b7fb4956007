// Search ThmA and ThmB certificates for the return times of a circle rotation to an arc.
#include <cstdio>
#include <iostream>

#include "sumdyn/sumdyn.hpp"

using namespace sumdyn;

int main() {
  const std::uint64_t W = 200'000;
  SetSpec A = return_time_set(1, Rational(514229, 832040), {0}, TorusBox{{make_arc(0, Rational(3, 5))}}, W);

  SearchBudget budget;
  budget.window = W;
  budget.K = 3;

  auto a = search_thmA(A, 1, budget);
  std::cout << "ThmA, ell = 1: " << (a.success ? "found" : "not found") << '\n';
  if (a.success) std::cout << to_json(a.cert).dump(2) << '\n';

  auto b = search_thmB(A, budget);
  std::cout << "ThmB: " << (b.success ? "found" : "not found") << '\n';
  if (b.success) std::cout << to_json(b.cert).dump(2) << '\n';
  if (!b.success && b.trace) std::cout << to_json(*b.trace).dump(2) << '\n';
  return a.success && b.success ? 0 : 2;
}
