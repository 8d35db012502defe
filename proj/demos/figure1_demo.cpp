// Uniform spanning forests on the two-terminal family: the sign of
// Cov({e open}, {connected}) as m grows, then the spin-level consequence.

#include <iostream>

#include "ccorr/explorer.hpp"

int main() {
  using namespace ccorr;
  std::cout << "m  forests  trees  covariance\n";
  for (int m = 1; m <= 10; ++m) {
    const auto a = figure1_analysis(m, 7);
    std::cout << m << "  " << a.closed_form.forests << "  " << a.closed_form.trees << "  " << to_string(a.covariance)
              << " (" << to_decimal(a.covariance) << ")" << (a.brute_force ? "  [brute force agrees]" : "") << '\n';
  }

  const auto d = lemma2_failure_demo(7, make_rational(1, 100));
  std::cout << "\nm = 7, alpha = 1/100, A = all spins +1\n"
            << "Cov(A, {e open} | sigma_x = +1) = " << to_string(d.covariance) << " (" << to_decimal(d.covariance) << ")\n"
            << "Pr(A | sigma_x = +1) = " << to_decimal(d.pr_all_plus_given_x) << ", Pr(connected) = "
            << to_decimal(d.pr_connected) << '\n';
}
