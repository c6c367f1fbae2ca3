#pragma once

// Kernels, normalized Gram matrices T_n = (k(X_i, X_j)/n), a cyclic Jacobi
// eigensolver and the eigenvalue bounds on local complexities of kernel
// classes.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "locrad/bounds.hpp"
#include "locrad/subroot.hpp"

namespace locrad {

class KernelSpec {
 public:
  enum class Kind { linear, polynomial, gaussian, explicit_table };

  static KernelSpec linear();
  /// (<x, y> + offset)^degree; degree >= 1, offset >= 0.
  static KernelSpec polynomial(double degree, double offset);
  /// exp(-|x - y|^2 / (2 width^2)); width > 0.
  static KernelSpec gaussian(double width);
  /// k(X_i, X_j) given directly as a row-major n x n table.
  static KernelSpec explicit_table(std::size_t n, std::vector<double> table);

  Kind kind() const noexcept { return kind_; }
  std::string name() const;
  NamedValues parameters() const;
  double operator()(std::span<const double> x, std::span<const double> y) const;
  std::size_t table_size() const noexcept { return table_n_; }
  double table(std::size_t i, std::size_t j) const { return table_[i * table_n_ + j]; }

 private:
  explicit KernelSpec(Kind kind) : kind_(kind) {}

  Kind kind_;
  double degree_ = 1.0;
  double offset_ = 0.0;
  double width_ = 1.0;
  std::size_t table_n_ = 0;
  std::vector<double> table_;
};

/// Symmetric n x n matrix, row-major.
class GramMatrix {
 public:
  GramMatrix(std::size_t n, std::vector<double> entries);

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const double> entries() const noexcept { return entries_; }
  double trace() const;
  double frobenius() const;

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

/// Entries k(x_i, x_j)/n; symmetric by construction. For an explicit table
/// the features are ignored except for their count.
GramMatrix gram(const KernelSpec& kernel, const std::vector<std::vector<double>>& features);
/// Explicit-table kernels need no features.
GramMatrix gram(const KernelSpec& kernel);

enum class SpectrumSource { empirical, supplied_true };

struct EigenSpectrum {
  std::vector<double> eigenvalues;  // nonincreasing, >= 0
  SpectrumSource source = SpectrumSource::empirical;
  std::optional<double> tail_mass;  // supplied spectra: bound on sum of omitted eigenvalues
};

struct EigenDecomposition {
  EigenSpectrum spectrum;
  std::vector<double> vectors;  // column j (row-major n x n) pairs with eigenvalue j
  std::size_t sweeps = 0;
};

inline constexpr double kNegativeEigenTolerance = 1e-8;

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// 1e-12 |A|_F. Eigenvalues in [-1e-8, 0) are clamped to 0; anything more
/// negative raises NumericError.
EigenDecomposition jacobi_eigen(const GramMatrix& matrix);
EigenSpectrum eigen_spectrum(const GramMatrix& matrix);

/// A truncated true spectrum with a declared bound on its omitted tail.
EigenSpectrum supplied_spectrum(std::vector<double> eigenvalues, std::optional<double> tail_mass);

/// sqrt((2/n) sum_i min(r, lambda_i)).
double lemma66_bound(const EigenSpectrum& spectrum, std::size_t n, double r);

/// sqrt((2/n) (sum_{i<=m} min(r, lambda_i) + tail)), tail added only when r > 0.
double thm65_bound(const EigenSpectrum& true_spectrum, std::size_t n, double r);

struct Cor67Result {
  double r_bound = 0.0;
  std::size_t h = 0;
};

/// min over h in {0..n} of h/n + sqrt((1/n) sum_{i>h} lambda_i); ties go to
/// the smaller h.
Cor67Result cor67_complexity(const EigenSpectrum& spectrum, std::size_t n);

/// r -> 4 c1 sqrt((2/n) sum_i min(c3 r/4, lambda_i)) + (c2 + 2) x/n with c1,
/// c2 (and c3 unless overridden) from the excess-risk constants for (L, B).
SubRootEvaluator kernel_psi_hat(const EigenSpectrum& spectrum, std::size_t n, double x, double L,
                                double B, std::optional<double> c3 = std::nullopt);

struct KernelPipelineResult {
  GramMatrix gram;
  EigenSpectrum spectrum;
  double trace = 0.0;
  double envelope = 0.0;  // sqrt(trace / n), the h = 0 value
  Cor67Result cor67;
  FixedPointResult fixed_point;
  BoundReport excess_risk;
  std::optional<double> lemma66_at_r;
};

/// Gram matrix, spectrum, envelope, psi_hat fixed point and excess-risk report.
KernelPipelineResult kernel_pipeline(const KernelSpec& kernel,
                                     const std::vector<std::vector<double>>& features, double x,
                                     double L, double B, std::optional<double> r = std::nullopt);
KernelPipelineResult kernel_pipeline(const GramMatrix& gram_matrix, double x, double L, double B,
                                     std::optional<double> r = std::nullopt);

}  // namespace locrad
