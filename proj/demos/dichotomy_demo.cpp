// Walks through the two halves of the dichotomy on catalog sets: a dyadic
// family with bounded exponent gaps, and a set whose cell counts jump fast
// enough to carry an explicit witness.

#include <iostream>

#include "zolab/zolab.hpp"

using namespace zolab;

int main() {
  const auto a = catalog::dyadic_a();
  std::cout << a.name << ": " << to_string(classify::mk_type(a).kind) << '\n';

  const auto tri = catalog::require("dyadic_family.triangular");
  std::cout << tri.name << ": " << to_string(classify::mk_type(tri).kind) << '\n';

  const auto [l1, l2] = catalog::union_counterexample();
  const Rational eps(1);
  const auto rt = classify::count_ratio_test(l1.spec, eps, Window(Rational(1), Rational(260)), 3);
  std::cout << l1.name << ": " << to_string(rt.verdict.kind) << ", chain";
  for (const auto& m : rt.chain.indices) std::cout << ' ' << m;
  std::cout << '\n';

  const auto w = witness::build_type2_witness(l1.spec, eps, rt.chain);
  auto xs = witness::equispaced(w.ic, 8);
  for (const auto& x : witness::equispaced(w.id, 8)) xs.push_back(x);
  const auto s = witness::summarize(witness::sum_profile(w, xs, rt.chain.size()));
  std::cout << "  sums on I_C stay below " << to_double(s.c_max_cumulative) << ", sums on I_D reach at least "
            << to_double(*s.d_min_cumulative) << '\n';

  const auto u = union_of(l1.spec, l2.spec);
  const Window win(Rational(1), Rational(16));
  std::cout << "union equals the diagonal grid on [1,16): " << std::boolalpha
            << equal_on(u, catalog::diagonal_grid().spec, win) << '\n';
  std::cout << "sum equals the union on [1,16): "
            << (enumerate(minkowski(l1.spec, l2.spec), win) == enumerate(u, win)) << '\n';
}
