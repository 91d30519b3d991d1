#pragma once

// Periodic spectral grid, sampled fields, transforms, Fourier multipliers and
// norms. The computational domain is the torus [-L/2, L/2)^n with N samples
// per axis; physical index i on an axis sits at x = -L/2 + i h. Flat indices
// are row-major with axis 1 slowest.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <new>
#include <span>
#include <vector>

#include "lame/timegrid.hpp"

namespace lame {

using cplx = std::complex<double>;

template <class T, std::size_t Align = 64>
struct AlignedAllocator {
  using value_type = T;
  template <class U>
  struct rebind {
    using other = AlignedAllocator<U, Align>;
  };
  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U, Align>&) noexcept {}

  T* allocate(std::size_t count) {
    std::size_t bytes = (count * sizeof(T) + Align - 1) / Align * Align;
    if (void* p = std::aligned_alloc(Align, bytes == 0 ? Align : bytes)) return static_cast<T*>(p);
    throw std::bad_alloc();
  }
  void deallocate(T* p, std::size_t) noexcept { std::free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U, Align>&) const noexcept { return true; }
};

using CVector = std::vector<cplx, AlignedAllocator<cplx>>;

struct Grid {
  int n = 3;
  int N = 64;
  double L = 6.283185307179586;

  /// Validating constructor: n >= 1, N >= 2 a power of two, L > 0.
  static Grid make(int n, int N, double L);

  double h() const { return L / N; }
  std::size_t size() const;
  double cell_volume() const;
  double volume() const;
  double coord(int i) const { return -0.5 * L + i * h(); }
  /// Signed lattice index k in [-N/2, N/2) for storage index i.
  int wavenumber(int i) const { return i < N / 2 ? i : i - N; }
  /// Periodic distance between two axis indices, in length units.
  double axis_distance(int a, int b) const;
  /// Multi-index of a flat index (axis 1 first).
  void unflatten(std::size_t flat, std::span<int> idx) const;
  std::size_t flatten(std::span<const int> idx) const;
  /// Flat index of the origin x = 0 (storage index N/2 on every axis).
  std::size_t origin() const;

  bool operator==(const Grid&) const = default;
};

/// Per-grid wave-vector tables, cached process-wide.
struct SpectralTables {
  std::vector<double> xi;     // n * size, component-major: xi[d * size + flat]
  std::vector<double> abs_xi; // |xi|
  std::vector<double> xi2;    // |xi|^2
  double component(int d, std::size_t flat) const { return xi[static_cast<std::size_t>(d) * abs_xi.size() + flat]; }
};
const SpectralTables& spectral_tables(const Grid& grid);

enum class Representation : std::uint8_t { Physical = 0, Spectral = 1 };

/// A (possibly vector-valued) complex field sampled on a grid. Vector fields
/// carry grid.n components, scalar fields one.
class Field {
 public:
  Field() = default;
  Field(const Grid& grid, int components, Representation rep = Representation::Physical);

  static Field vector(const Grid& grid, Representation rep = Representation::Physical) {
    return Field(grid, grid.n, rep);
  }
  static Field scalar(const Grid& grid, Representation rep = Representation::Physical) {
    return Field(grid, 1, rep);
  }

  const Grid& grid() const { return grid_; }
  int components() const { return components_; }
  Representation representation() const { return rep_; }
  bool is_vector() const { return components_ == grid_.n; }
  std::size_t points() const { return points_; }

  std::span<cplx> component(int j) { return {data_.data() + j * points_, points_}; }
  std::span<const cplx> component(int j) const { return {data_.data() + j * points_, points_}; }
  cplx& at(int j, std::size_t flat) { return data_[j * points_ + flat]; }
  const cplx& at(int j, std::size_t flat) const { return data_[j * points_ + flat]; }
  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  /// Relabels the stored coefficients; used only by the transform layer.
  void set_representation(Representation rep) { rep_ = rep; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(cplx c);
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Field a, cplx c) { return a *= c; }
  friend Field operator*(cplx c, Field a) { return a *= c; }

  /// Max modulus over all components and points.
  double max_abs() const;
  /// Extract one component as a scalar field.
  Field component_field(int j) const;

 private:
  Grid grid_{};
  int components_ = 0;
  std::size_t points_ = 0;
  Representation rep_ = Representation::Physical;
  CVector data_;
};

/// Nonnegative (or signed) real scalar field: weights, densities, |V|.
struct RealField {
  Grid grid;
  std::vector<double> values;

  RealField() = default;
  RealField(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
  double max() const;
  double min() const;
};

struct SobolevIndex {
  double s = 0.0;
  bool homogeneous = true;
  double r = 2.0;  // use infinity() for r = inf
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// --- transforms (unitary normalization) ---

Field forward_transform(const Field& f);
Field inverse_transform(const Field& f);
Field to_spectral(Field f);
Field to_physical(Field f);

/// Projects out the per-component mean (zero mode). Any representation.
Field remove_mean(Field f);
/// Per-component mean in the physical sense.
std::vector<cplx> component_means(const Field& f);

// --- multipliers; results come back in the input representation ---

/// Spectral multiplication by a scalar symbol m(xi) on every component.
using ScalarSymbol = std::function<cplx(std::span<const double> xi, double abs_xi)>;
Field apply_scalar_multiplier(const Field& f, const ScalarSymbol& m);

/// |grad|^s, symbol |xi|^s; the zero mode is mapped to 0 for every s.
Field fractional_multiplier(const Field& f, double s);
/// (1 - Laplacian)^{s/2}, symbol (1 + |xi|^2)^{s/2}.
Field bessel_multiplier(const Field& f, double s);
/// Riesz transform R_j (axis j is 0-based), symbol i xi_j / |xi|.
Field riesz_transform(const Field& phi, int axis);
/// Spectral gradient of a scalar field (vector result).
Field gradient(const Field& phi);
/// Spectral divergence of a vector field (scalar result).
Field divergence(const Field& f);
/// Componentwise Laplacian.
Field laplacian(const Field& f);

// --- norms and inner products ---

/// (sum_j ||f_j||_{L^r}^r)^{1/r} with Riemann sums; r = inf gives the grid maximum.
double lebesgue_norm(const Field& f, double r);
double sobolev_norm(const Field& f, const SobolevIndex& idx);
double l2_norm(const Field& f);
/// <f, g> = h^n sum f conj(g), physical representation.
cplx inner_product(const Field& f, const Field& g);
/// Spatial L^2(w dx) norm.
double weighted_l2(const Field& f, const RealField& w);
/// Pointwise |f|^2 summed over components.
RealField pointwise_norm2(const Field& f);

/// (int int |u|^2 w dx dt)^{1/2} with caller-supplied time quadrature weights.
double weighted_l2_spacetime(std::span<const Field> samples, const RealField& w,
                             std::span<const double> time_weights);
/// Same, with trapezoid weights on a uniform time grid (one sample per t_k).
double weighted_l2_spacetime(std::span<const Field> samples, const RealField& w,
                             const TimeGrid& time);

}  // namespace lame
