#pragma once

#include <functional>
#include <vector>

namespace grandlp {

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the minimum of a unimodal f on [lo, hi].
/// Stops once the bracket is narrower than rel_tol * (|x| + abs_floor).
Extremum golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol = 1e-12, int max_iter = 200);

/// Same search for a maximum.
Extremum golden_maximize(const std::function<double(double)>& f, double lo, double hi,
                         double rel_tol = 1e-12, int max_iter = 200);

/// Evaluate f on the given nodes, then golden-refine around the best node.
/// Works for minimisation; the caller negates for maximisation.
/// `best_index` reports which node seeded the refinement.
Extremum scan_refine_minimize(const std::function<double(double)>& f,
                              const std::vector<double>& nodes, int* best_index = nullptr,
                              double rel_tol = 1e-12);

std::vector<double> linspace(double lo, double hi, int n);
std::vector<double> geomspace(double lo, double hi, int n);

}  // namespace grandlp
