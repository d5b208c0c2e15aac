#pragma once

#include <string>
#include <vector>

#include "reachck/front.hpp"

namespace reachck {

/// A program that builds the Church numeral n by n successive declarations.
std::string church_nat_program(int n);

struct BenchPoint {
  int size = 0;       // numeral
  std::size_t term_size = 0;  // AST nodes of the checked let chain
  double millis = 0;  // median checking time
  bool ok = false;
};

/// Check church_nat_program(n) for every n, `reps` times each, keeping the median.
std::vector<BenchPoint> run_church_bench(const Prelude& prelude, const std::vector<int>& sizes, int reps);

struct QuadFit {
  double a = 0, b = 0, c = 0;  // y = a + b x + c x^2
  double r2 = 0;
};

/// Least-squares quadratic fit of y against x.
QuadFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace reachck
