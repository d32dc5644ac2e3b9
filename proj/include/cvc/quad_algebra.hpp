// Copyright 2026 The cvc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvc/errors.hpp"

namespace cvc {

/** Quadrature axis of a bosonic mode. Units are chosen so that the canonical
 *  commutator is [x̂, p̂] = i and the vacuum satisfies ⟨x̂²⟩ = ⟨p̂²⟩ = 1. */
enum class Axis : std::uint8_t { X = 0, P = 1 };

/** Short lowercase name of an axis: "x" or "p". */
const char* axis_name(Axis axis);

/** Identifier of an elementary source mode inside a SourceRegistry. */
struct SourceId {
  std::uint32_t value = 0;

  friend constexpr bool operator==(SourceId a, SourceId b) {
    return a.value == b.value;
  }
  friend constexpr auto operator<=>(SourceId a, SourceId b) {
    return a.value <=> b.value;
  }
};

/** Statistical description of an elementary zero-mean source mode.
 *
 *  Every circuit input is one of four kinds; each kind fixes the diagonal
 *  second moments (⟨x̂²⟩, ⟨p̂²⟩) of the source. Cross moments ⟨x̂p̂ + p̂x̂⟩
 *  vanish for all kinds, and distinct sources are uncorrelated. */
class SourceKind {
 public:
  enum class Tag : std::uint8_t { Vacuum, SqueezedX, SqueezedP, InputSignal };

  /** Vacuum mode: ⟨x̂²⟩ = ⟨p̂²⟩ = 1. */
  static SourceKind vacuum();
  /** Position-squeezed vacuum: ⟨x̂²⟩ = e^{-2r}, ⟨p̂²⟩ = e^{2r}, r ≥ 0. */
  static SourceKind squeezed_x(double r);
  /** Momentum-squeezed vacuum: ⟨x̂²⟩ = e^{2r}, ⟨p̂²⟩ = e^{-2r}, r ≥ 0. */
  static SourceKind squeezed_p(double r);
  /** Generic signal with explicit variances; must satisfy the uncertainty
   *  bound ⟨x̂²⟩·⟨p̂²⟩ ≥ 1. */
  static SourceKind input_signal(double x_var, double p_var);

  Tag tag() const { return tag_; }
  /** Squeezing strength; only meaningful for the squeezed kinds. */
  double squeeze_r() const { return r_; }
  /** Second moment of the given axis. */
  double moment(Axis axis) const { return axis == Axis::X ? x_var_ : p_var_; }
  /** (⟨x̂²⟩, ⟨p̂²⟩) pair. */
  std::pair<double, double> moments() const { return {x_var_, p_var_}; }

 private:
  SourceKind(Tag tag, double x_var, double p_var, double r)
      : tag_(tag), x_var_(x_var), p_var_(p_var), r_(r) {}

  Tag tag_;
  double x_var_;
  double p_var_;
  double r_;
};

/** Registry of the elementary sources feeding a circuit.
 *
 *  Allocation validates the kind's parameters (squeezing strengths must be
 *  nonnegative, signal variances must respect the uncertainty bound) and
 *  attaches a human-readable label used in reports. */
class SourceRegistry {
 public:
  SourceId allocate(const SourceKind& kind, std::string label);

  std::size_t size() const { return entries_.size(); }
  const SourceKind& kind(SourceId id) const;
  const std::string& label(SourceId id) const;
  std::optional<SourceId> find(std::string_view label) const;

 private:
  struct Entry {
    SourceKind kind;
    std::string label;
  };
  std::vector<Entry> entries_;
};

/** A Heisenberg-picture quadrature operator: a real linear combination of
 *  elementary source quadratures plus a c-number offset,
 *
 *      expr = Σ_k c_k · q̂(s_k, a_k) + offset.
 *
 *  Terms are kept sorted by (source, axis) with exact-zero coefficients
 *  pruned, so structurally equal expressions have identical term sequences
 *  and serialized reports are byte-stable. */
class QuadExpr {
 public:
  struct Term {
    SourceId source;
    Axis axis;
    double coeff;
  };

  QuadExpr() = default;

  /** The operator coeff·q̂(source, axis). */
  static QuadExpr variable(SourceId source, Axis axis, double coeff = 1.0);
  /** A pure c-number. */
  static QuadExpr constant(double offset);

  const std::vector<Term>& terms() const { return terms_; }
  double offset() const { return offset_; }
  void set_offset(double value) { offset_ = value; }

  /** Coefficient of q̂(source, axis); zero when the term is absent. */
  double coefficient(SourceId source, Axis axis) const;
  /** Adds coeff·q̂(source, axis), merging with an existing term. */
  void add_term(SourceId source, Axis axis, double coeff);
  /** True when there are no operator terms and the offset is zero. */
  bool is_zero() const { return terms_.empty() && offset_ == 0.0; }
  /** True when some term references `source` (on either axis). */
  bool references(SourceId source) const;

  QuadExpr& operator+=(const QuadExpr& other);
  QuadExpr& operator-=(const QuadExpr& other);
  QuadExpr& operator*=(double scale);

  friend QuadExpr operator+(QuadExpr a, const QuadExpr& b) { return a += b; }
  friend QuadExpr operator-(QuadExpr a, const QuadExpr& b) { return a -= b; }
  friend QuadExpr operator*(QuadExpr a, double s) { return a *= s; }
  friend QuadExpr operator*(double s, QuadExpr a) { return a *= s; }
  friend QuadExpr operator-(QuadExpr a) { return a *= -1.0; }

 private:
  std::vector<Term> terms_;  // sorted by (source, axis), no zero coefficients
  double offset_ = 0.0;
};

/** Σ_k coeffs[k]·exprs[k]; the spans must have equal length. */
QuadExpr linear_combine(std::span<const QuadExpr> exprs,
                        std::span<const double> coeffs);

/** Imaginary part of the commutator: [a, b] = i · commutator_im(a, b).
 *
 *  Follows from bilinearity and [x̂(s), p̂(t)] = i·δ_{st}; the result is
 *  exactly Σ_s (a_x(s)·b_p(s) − a_p(s)·b_x(s)). Offsets do not contribute. */
double commutator_im(const QuadExpr& a, const QuadExpr& b);

/** ⟨a²⟩ over the registry's source statistics. Operator terms contribute
 *  Σ c_k²·⟨q̂_k²⟩ (sources are uncorrelated and have no cross moments);
 *  the squared offset is added only when include_offset is set. */
double second_moment(const QuadExpr& a, const SourceRegistry& registry,
                     bool include_offset = false);

/** Symmetrized covariance ⟨{a, b}/2⟩ over the registry's statistics. */
double covariance(const QuadExpr& a, const QuadExpr& b,
                  const SourceRegistry& registry,
                  bool include_offsets = false);

/** Largest absolute difference between the coefficients (and offsets) of two
 *  expressions; zero iff they are structurally identical. */
double max_term_delta(const QuadExpr& a, const QuadExpr& b);

/** A mode in flight: its two Heisenberg-picture quadrature expressions. */
struct ModeQuads {
  QuadExpr x;
  QuadExpr p;
};

}  // namespace cvc
