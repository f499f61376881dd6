/// @file closed_form_demo.cpp
/// @brief Prints the exact mean-spin and price curves for one parameter set in
///        each damping regime, alongside the classifier's verdict.

#include <cstdio>

#include <hiam/analytic.hpp>
#include <hiam/classifier.hpp>
#include <hiam/params.hpp>

namespace {

void show(const char* label, const hiam::ModelParams& p) {
  const hiam::DerivedConstants dc = hiam::derived_constants(p);
  const hiam::ExtremaVerdict v =
      hiam::classify_verdict(p, hiam::constant_pf_mode(p));
  std::printf("%s  (lambda=%g theta=%g kappa=%g gamma=%g m0=%g)\n", label,
              p.lambda, p.theta, p.kappa, p.gamma, p.m0);
  std::printf("  regime=%s  D=%.6f  pattern=%s  t_star=%g  extrema_in_window=%zu\n",
              to_string(hiam::classify_regime(p)), dc.disc, to_string(v.pattern),
              v.t_star, v.extrema.size());
  std::printf("  %8s  %12s  %12s\n", "t", "m(t)", "P(t)");
  for (double t = 0.0; t <= 10.0 + 1e-12; t += 1.0)
    std::printf("  %8.1f  %12.6f  %12.6f\n", t, hiam::m_case_a(t, p),
                hiam::price_case_a(t, p));
  std::printf("\n");
}

}  // namespace

int main() {
  hiam::ModelParams over;
  over.lambda = 0.04;
  over.theta = 1.0;
  over.kappa = 0.1;
  over.gamma = 0.05;
  over.m0 = 0.4;
  show("overdamped", over);

  hiam::ModelParams under;
  under.lambda = 0.5;
  under.theta = 1.0;
  under.kappa = 0.3;
  under.gamma = 0.1;
  under.m0 = 0.4;
  show("underdamped", under);

  hiam::ModelParams crit;
  crit.theta = 1.0;
  crit.kappa = 0.2;
  crit.gamma = 0.05;
  crit.m0 = 0.4;
  const double ac = 0.5 * (1.0 - crit.kappa / crit.theta);
  crit.lambda = crit.theta * ac * ac;  // puts the discriminant exactly at zero
  show("critical", crit);
  return 0;
}
