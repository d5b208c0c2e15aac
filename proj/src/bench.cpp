#include "reachck/bench.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>

namespace reachck {

std::string church_nat_program(int n) {
  std::string s = "val n0 = zero;\n";
  for (int i = 1; i <= n; ++i) s += "val n" + std::to_string(i) + " = succ n" + std::to_string(i - 1) + ";\n";
  return s;
}

std::vector<BenchPoint> run_church_bench(const Prelude& prelude, const std::vector<int>& sizes, int reps) {
  std::vector<BenchPoint> out;
  for (int n : sizes) {
    const std::string src = church_nat_program(n);
    BenchPoint pt;
    pt.size = n;
    std::vector<double> times;
    for (int r = 0; r < reps; ++r) {
      ParseResult pr = parse_program(src, prelude.scope);
      if (!pr.program) break;
      std::vector<Decl> decls = prelude.decls;
      decls.insert(decls.end(), pr.program->decls.begin(), pr.program->decls.end());
      if (r == 0) pt.term_size = term_size(program_term(decls));
      const auto t0 = std::chrono::steady_clock::now();
      ProgramReport rep = typecheck_program(decls);
      const auto t1 = std::chrono::steady_clock::now();
      pt.ok = rep.ok;
      times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    if (!times.empty()) {
      std::sort(times.begin(), times.end());
      pt.millis = times[times.size() / 2];
    }
    out.push_back(pt);
  }
  return out;
}

QuadFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& y) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = 1;
    A(i, 1) = x[i];
    A(i, 2) = x[i] * x[i];
    b(i) = y[i];
  }
  Eigen::Vector3d coef = A.colPivHouseholderQr().solve(b);
  QuadFit f{coef(0), coef(1), coef(2), 0};
  const double mean = b.mean();
  const double ss_tot = (b.array() - mean).square().sum();
  const double ss_res = (A * coef - b).squaredNorm();
  f.r2 = ss_tot > 0 ? 1 - ss_res / ss_tot : 1;
  return f;
}

}  // namespace reachck
