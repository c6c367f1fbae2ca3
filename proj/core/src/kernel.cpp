#include "locrad/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "locrad/error.hpp"

namespace locrad {

KernelSpec KernelSpec::linear() { return KernelSpec(Kind::linear); }

KernelSpec KernelSpec::polynomial(double degree, double offset) {
  if (!(degree >= 1.0) || !std::isfinite(degree)) {
    throw ConfigurationError("polynomial kernel degree must be >= 1");
  }
  if (!(offset >= 0.0) || !std::isfinite(offset)) {
    throw ConfigurationError("polynomial kernel offset must be >= 0");
  }
  KernelSpec k(Kind::polynomial);
  k.degree_ = degree;
  k.offset_ = offset;
  return k;
}

KernelSpec KernelSpec::gaussian(double width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw ConfigurationError("gaussian kernel width must be > 0");
  }
  KernelSpec k(Kind::gaussian);
  k.width_ = width;
  return k;
}

KernelSpec KernelSpec::explicit_table(std::size_t n, std::vector<double> table) {
  if (n == 0 || table.size() != n * n) {
    throw DimensionError("explicit kernel table must be n x n with n >= 1");
  }
  for (double v : table) {
    if (!std::isfinite(v)) throw ConfigurationError("kernel table entries must be finite");
  }
  KernelSpec k(Kind::explicit_table);
  k.table_n_ = n;
  k.table_ = std::move(table);
  return k;
}

std::string KernelSpec::name() const {
  switch (kind_) {
    case Kind::linear: return "linear";
    case Kind::polynomial: return "polynomial";
    case Kind::gaussian: return "gaussian";
    case Kind::explicit_table: return "explicit_table";
  }
  return "unknown";
}

NamedValues KernelSpec::parameters() const {
  switch (kind_) {
    case Kind::polynomial: return {{"degree", degree_}, {"offset", offset_}};
    case Kind::gaussian: return {{"width", width_}};
    case Kind::explicit_table: return {{"n", static_cast<double>(table_n_)}};
    case Kind::linear: break;
  }
  return {};
}

double KernelSpec::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) throw DimensionError("kernel arguments differ in dimension");
  switch (kind_) {
    case Kind::linear:
      return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
    case Kind::polynomial:
      return std::pow(std::inner_product(x.begin(), x.end(), y.begin(), 0.0) + offset_, degree_);
    case Kind::gaussian: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
      return std::exp(-d2 / (2.0 * width_ * width_));
    }
    case Kind::explicit_table:
      break;
  }
  throw PreconditionError("explicit-table kernels are evaluated by index, not by features");
}

GramMatrix::GramMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n_ == 0 || entries_.size() != n_ * n_) throw DimensionError("Gram matrix must be n x n, n >= 1");
}

double GramMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += entries_[i * n_ + i];
  return t;
}

double GramMatrix::frobenius() const {
  double s = 0.0;
  for (double v : entries_) s += v * v;
  return std::sqrt(s);
}

GramMatrix gram(const KernelSpec& kernel, const std::vector<std::vector<double>>& features) {
  if (kernel.kind() == KernelSpec::Kind::explicit_table) {
    if (!features.empty() && features.size() != kernel.table_size()) {
      throw DimensionError("explicit kernel table size differs from the number of points");
    }
    return gram(kernel);
  }
  const std::size_t n = features.size();
  if (n == 0) throw PreconditionError("Gram matrix needs at least one point");
  std::vector<double> entries(n * n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel(features[i], features[j]) * scale;
      entries[i * n + j] = v;
      entries[j * n + i] = v;
    }
  }
  return GramMatrix(n, std::move(entries));
}

GramMatrix gram(const KernelSpec& kernel) {
  if (kernel.kind() != KernelSpec::Kind::explicit_table) {
    throw PreconditionError("only explicit-table kernels build a Gram matrix without features");
  }
  const std::size_t n = kernel.table_size();
  std::vector<double> entries(n * n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = kernel.table(i, j) * scale;
  }
  return GramMatrix(n, std::move(entries));
}

EigenDecomposition jacobi_eigen(const GramMatrix& matrix) {
  const std::size_t n = matrix.n();
  std::vector<double> a(matrix.entries().begin(), matrix.entries().end());
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(a[i * n + j] - a[j * n + i]) > 1e-12 * std::max(1.0, scale)) {
        throw PreconditionError("matrix is not symmetric");
      }
      const double avg = 0.5 * (a[i * n + j] + a[j * n + i]);
      a[i * n + j] = avg;
      a[j * n + i] = avg;
    }
  }
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double norm = matrix.frobenius();
  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) s += a[i * n + j] * a[i * n + j];
      }
    }
    return std::sqrt(s);
  };

  EigenDecomposition out;
  constexpr std::size_t kMaxSweeps = 100;
  while (off_diagonal() > 1e-12 * norm) {
    if (out.sweeps == kMaxSweeps) throw NumericError("Jacobi iteration did not converge");
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p * n + k];
          const double aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k * n + p];
          const double vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * vkq;
          v[k * n + q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });
  out.spectrum.eigenvalues.resize(n);
  out.vectors.resize(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    double lambda = a[order[j] * n + order[j]];
    if (lambda < 0.0) {
      if (lambda < -kNegativeEigenTolerance) {
        throw NumericError("eigenvalue " + std::to_string(lambda) +
                           " is below -1e-8: the kernel matrix is not positive semidefinite");
      }
      lambda = 0.0;
    }
    out.spectrum.eigenvalues[j] = lambda;
    for (std::size_t k = 0; k < n; ++k) out.vectors[k * n + j] = v[k * n + order[j]];
  }
  out.spectrum.source = SpectrumSource::empirical;
  return out;
}

EigenSpectrum eigen_spectrum(const GramMatrix& matrix) { return jacobi_eigen(matrix).spectrum; }

EigenSpectrum supplied_spectrum(std::vector<double> eigenvalues, std::optional<double> tail_mass) {
  for (double l : eigenvalues) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw PreconditionError("eigenvalues must be finite and >= 0");
  }
  if (tail_mass && !(*tail_mass >= 0.0)) throw PreconditionError("tail mass must be >= 0");
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
  EigenSpectrum s;
  s.eigenvalues = std::move(eigenvalues);
  s.source = SpectrumSource::supplied_true;
  s.tail_mass = tail_mass;
  return s;
}

double lemma66_bound(const EigenSpectrum& spectrum, std::size_t n, double r) {
  if (n == 0) throw PreconditionError("n must be >= 1");
  if (!(r >= 0.0)) throw PreconditionError("r must be >= 0");
  double s = 0.0;
  for (double l : spectrum.eigenvalues) s += std::min(r, l);
  return std::sqrt(2.0 / static_cast<double>(n) * s);
}

double thm65_bound(const EigenSpectrum& true_spectrum, std::size_t n, double r) {
  if (!true_spectrum.tail_mass) {
    throw PreconditionError("a truncated true spectrum needs a declared tail mass");
  }
  if (n == 0) throw PreconditionError("n must be >= 1");
  if (!(r >= 0.0)) throw PreconditionError("r must be >= 0");
  double s = 0.0;
  for (double l : true_spectrum.eigenvalues) s += std::min(r, l);
  if (r > 0.0) s += *true_spectrum.tail_mass;
  return std::sqrt(2.0 / static_cast<double>(n) * s);
}

Cor67Result cor67_complexity(const EigenSpectrum& spectrum, std::size_t n) {
  if (n == 0) throw PreconditionError("n must be >= 1");
  const auto& l = spectrum.eigenvalues;
  const double nn = static_cast<double>(n);
  // tail[h] = sum_{i > h} lambda_i (1-based), i.e. eigenvalues from index h on.
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t h = n; h-- > 0;) tail[h] = tail[h + 1] + (h < l.size() ? l[h] : 0.0);
  Cor67Result best{std::sqrt(tail[0] / nn), 0};
  for (std::size_t h = 1; h <= n; ++h) {
    const double v = static_cast<double>(h) / nn + std::sqrt(tail[h] / nn);
    if (v < best.r_bound) best = {v, h};
  }
  return best;
}

SubRootEvaluator kernel_psi_hat(const EigenSpectrum& spectrum, std::size_t n, double x, double L,
                                double B, std::optional<double> c3) {
  if (n == 0) throw PreconditionError("n must be >= 1");
  if (!(x > 0.0)) throw PreconditionError("x must be > 0");
  const NamedValues constants = constants_for("5.4", B, L);
  const double c1 = lookup(constants, "c1");
  const double c2 = lookup(constants, "c2");
  const double radius = c3 ? *c3 : lookup(constants, "c3");
  if (!(radius > 0.0)) throw PreconditionError("radius multiplier must be > 0");
  const double additive = (c2 + 2.0) * x / static_cast<double>(n);
  auto lambdas = std::make_shared<const std::vector<double>>(spectrum.eigenvalues);
  return SubRootEvaluator([=](double r) {
    double s = 0.0;
    for (double l : *lambdas) s += std::min(radius * r / 4.0, l);
    return 4.0 * c1 * std::sqrt(2.0 / static_cast<double>(n) * s) + additive;
  });
}

KernelPipelineResult kernel_pipeline(const GramMatrix& gram_matrix, double x, double L, double B,
                                     std::optional<double> r) {
  const std::size_t n = gram_matrix.n();
  KernelPipelineResult out{gram_matrix, eigen_spectrum(gram_matrix), 0.0, 0.0, {}, {}, {}, {}};
  out.trace = gram_matrix.trace();
  out.envelope = std::sqrt(out.trace / static_cast<double>(n));
  out.cor67 = cor67_complexity(out.spectrum, n);
  const SubRootEvaluator psi = kernel_psi_hat(out.spectrum, n, x, L, B);
  out.fixed_point = solve_fixed_point(psi, 1.0);
  BoundParams p;
  p.n = n;
  p.x = x;
  p.L = L;
  p.B = B;
  p.a = -1.0;
  p.b = 1.0;
  out.excess_risk = excess_risk_bound_thm54(p, out.fixed_point.r_star);
  if (r) out.lemma66_at_r = lemma66_bound(out.spectrum, n, *r);
  return out;
}

KernelPipelineResult kernel_pipeline(const KernelSpec& kernel,
                                     const std::vector<std::vector<double>>& features, double x,
                                     double L, double B, std::optional<double> r) {
  return kernel_pipeline(gram(kernel, features), x, L, B, r);
}

}  // namespace locrad
