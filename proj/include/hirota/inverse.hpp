#pragma once

// Reflectionless inverse problem in the focusing case.

#include <span>
#include <string>
#include <vector>

#include "hirota/lax.hpp"
#include "hirota/spectral.hpp"

namespace hirota {

enum class NormingRank { Rank1, Rank2 };

struct DiscreteEigenpair {
  cplx z;
  CMat2 C;
  NormingRank rank = NormingRank::Rank1;
};

// Strict: seeds must lie in D+ with Im z > 0 and |z| > k0.
// OffSpectrum: only Im z != 0, no branch point and no pole collisions. Used for breathers whose
// eigenvalue sits on or inside the circle |z| = k0.
enum class QuartetPolicy { Strict, OffSpectrum };

struct QuartetEntry {
  cplx zeta;
  CMat2 C;
  CMat2 Cbar;
};

struct SolitonSpec {
  Background bg;
  std::vector<QuartetEntry> entries;  // seeds first, then their partners -k0^2/conj(zeta)

  std::size_t seed_count() const { return entries.size() / 2; }
};

// -k0^2 / conj(z), rounded once from extended precision.
cplx quartet_partner(cplx z, const Background& bg);

SolitonSpec expand_quartets(std::span<const DiscreteEigenpair> seeds, const Background& bg,
                            QuartetPolicy policy = QuartetPolicy::Strict);

// Block system  X_n + sum_l X_l Gamma(n, l) = B_n,  n = 1..2N, written as  sum_l X_l A(n, l) = B_n.
struct LinearSystem {
  std::size_t n = 0;
  std::vector<CMat2> A;  // A[n * size + l] = delta_nl I + Gamma(n, l)
  std::vector<CMat2> B;

  const CMat2& a(std::size_t row, std::size_t col) const { return A[row * n + col]; }

  // Solves the flattened 4N x 4N system by partially pivoted LU.
  std::vector<CMat2> solve() const;
  double residual(std::span<const CMat2> X) const;
  double condition_number() const;
};

LinearSystem assemble_system(double x, double t, const SolitonSpec& spec);

// Q = Q+ + i sum_n exp(2 i theta(conj(zeta_n))) X_n Cbar_n, solved in rank-factored form.
// Throws SingularSystem when the reduced system has condition number above 1e12 or overflows.
CMat2 reconstruct_Q(double x, double t, const SolitonSpec& spec);

// Same reconstruction through the flattened 4N x 4N solve of assemble_system.
CMat2 reconstruct_Q_flat(double x, double t, const SolitonSpec& spec);

enum class Precision { Double, Extended };

// Explicit one-soliton formula. Extended evaluates in 100-digit arithmetic.
CMat2 one_soliton_closed_form(double x, double t, const DiscreteEigenpair& seed, const Background& bg,
                              Precision precision = Precision::Double,
                              QuartetPolicy policy = QuartetPolicy::Strict);

struct GridAxes {
  double xmin = -5.0, xmax = 5.0;
  std::size_t nx = 201;
  double tmin = -3.0, tmax = 3.0;
  std::size_t nt = 121;

  std::vector<double> x_values() const;
  std::vector<double> t_values() const;
};

// Three independent entries of a symmetric Q; `skew` = Q(1,0) - Q(0,1) records any asymmetry
// and is not serialized.
struct FieldValue {
  cplx q1;
  cplx q0;
  cplx qm1;
  cplx skew{};

  CMat2 matrix() const { return CMat2{{q1, q0, q0 + skew, qm1}}; }
  static FieldValue from(const CMat2& Q) { return {Q(0, 0), Q(0, 1), Q(1, 1), Q(1, 0) - Q(0, 1)}; }
};

struct FieldGrid {
  std::vector<double> x;
  std::vector<double> t;
  std::vector<FieldValue> values;  // t outer, x inner
  std::vector<unsigned char> mask;  // 1 where evaluation failed
  std::string preset;
  std::string version;

  const FieldValue& at(std::size_t it, std::size_t ix) const { return values[it * x.size() + ix]; }
  std::size_t masked_count() const;
  void validate() const;
};

// Grid evaluation of reconstruct_Q; failures are recorded in the mask.
FieldGrid eval_field(const GridAxes& axes, const SolitonSpec& spec);

// Reconstruction wrapped as a callable field.
Field make_field(const SolitonSpec& spec);

}  // namespace hirota
