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

#include "cvc/quad_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace cvc {

namespace {

// Slack on the uncertainty product so that analytically saturating inputs
// (e.g. e^{2r}·e^{-2r}) are not rejected for rounding reasons.
constexpr double kUncertaintySlack = 1e-12;

bool term_key_less(const QuadExpr::Term& t, std::pair<SourceId, Axis> key) {
  if (t.source != key.first) return t.source < key.first;
  return static_cast<int>(t.axis) < static_cast<int>(key.second);
}

}  // namespace

const char* axis_name(Axis axis) { return axis == Axis::X ? "x" : "p"; }

SourceKind SourceKind::vacuum() { return SourceKind(Tag::Vacuum, 1.0, 1.0, 0.0); }

SourceKind SourceKind::squeezed_x(double r) {
  return SourceKind(Tag::SqueezedX, std::exp(-2.0 * r), std::exp(2.0 * r), r);
}

SourceKind SourceKind::squeezed_p(double r) {
  return SourceKind(Tag::SqueezedP, std::exp(2.0 * r), std::exp(-2.0 * r), r);
}

SourceKind SourceKind::input_signal(double x_var, double p_var) {
  return SourceKind(Tag::InputSignal, x_var, p_var, 0.0);
}

SourceId SourceRegistry::allocate(const SourceKind& kind, std::string label) {
  switch (kind.tag()) {
    case SourceKind::Tag::Vacuum:
      break;
    case SourceKind::Tag::SqueezedX:
    case SourceKind::Tag::SqueezedP:
      if (!(kind.squeeze_r() >= 0.0)) {
        throw ParameterError("squeezing strength must be nonnegative, got r = " +
                             std::to_string(kind.squeeze_r()));
      }
      break;
    case SourceKind::Tag::InputSignal: {
      auto [x_var, p_var] = kind.moments();
      if (!(x_var >= 0.0) || !(p_var >= 0.0)) {
        throw ParameterError("signal variances must be nonnegative");
      }
      if (x_var * p_var < 1.0 - kUncertaintySlack) {
        throw ParameterError(
            "signal variances violate the uncertainty bound: ⟨x²⟩·⟨p²⟩ = " +
            std::to_string(x_var * p_var) + " < 1");
      }
      break;
    }
  }
  entries_.push_back(Entry{kind, std::move(label)});
  return SourceId{static_cast<std::uint32_t>(entries_.size() - 1)};
}

const SourceKind& SourceRegistry::kind(SourceId id) const {
  if (id.value >= entries_.size()) {
    throw UsageError("unknown source id " + std::to_string(id.value));
  }
  return entries_[id.value].kind;
}

const std::string& SourceRegistry::label(SourceId id) const {
  if (id.value >= entries_.size()) {
    throw UsageError("unknown source id " + std::to_string(id.value));
  }
  return entries_[id.value].label;
}

std::optional<SourceId> SourceRegistry::find(std::string_view label) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].label == label) {
      return SourceId{static_cast<std::uint32_t>(i)};
    }
  }
  return std::nullopt;
}

QuadExpr QuadExpr::variable(SourceId source, Axis axis, double coeff) {
  QuadExpr e;
  e.add_term(source, axis, coeff);
  return e;
}

QuadExpr QuadExpr::constant(double offset) {
  QuadExpr e;
  e.offset_ = offset;
  return e;
}

double QuadExpr::coefficient(SourceId source, Axis axis) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(),
                             std::make_pair(source, axis), term_key_less);
  if (it != terms_.end() && it->source == source && it->axis == axis) {
    return it->coeff;
  }
  return 0.0;
}

void QuadExpr::add_term(SourceId source, Axis axis, double coeff) {
  if (coeff == 0.0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(),
                             std::make_pair(source, axis), term_key_less);
  if (it != terms_.end() && it->source == source && it->axis == axis) {
    it->coeff += coeff;
    if (it->coeff == 0.0) terms_.erase(it);
  } else {
    terms_.insert(it, Term{source, axis, coeff});
  }
}

bool QuadExpr::references(SourceId source) const {
  return coefficient(source, Axis::X) != 0.0 ||
         coefficient(source, Axis::P) != 0.0;
}

QuadExpr& QuadExpr::operator+=(const QuadExpr& other) {
  for (const Term& t : other.terms_) add_term(t.source, t.axis, t.coeff);
  offset_ += other.offset_;
  return *this;
}

QuadExpr& QuadExpr::operator-=(const QuadExpr& other) {
  for (const Term& t : other.terms_) add_term(t.source, t.axis, -t.coeff);
  offset_ -= other.offset_;
  return *this;
}

QuadExpr& QuadExpr::operator*=(double scale) {
  if (scale == 0.0) {
    terms_.clear();
    offset_ = 0.0;
    return *this;
  }
  for (Term& t : terms_) t.coeff *= scale;
  offset_ *= scale;
  return *this;
}

QuadExpr linear_combine(std::span<const QuadExpr> exprs,
                        std::span<const double> coeffs) {
  if (exprs.size() != coeffs.size()) {
    throw UsageError("linear_combine: got " + std::to_string(exprs.size()) +
                     " expressions but " + std::to_string(coeffs.size()) +
                     " coefficients");
  }
  QuadExpr out;
  for (std::size_t k = 0; k < exprs.size(); ++k) {
    out += exprs[k] * coeffs[k];
  }
  return out;
}

double commutator_im(const QuadExpr& a, const QuadExpr& b) {
  double result = 0.0;
  for (const QuadExpr::Term& t : a.terms()) {
    if (t.axis == Axis::X) {
      result += t.coeff * b.coefficient(t.source, Axis::P);
    } else {
      result -= t.coeff * b.coefficient(t.source, Axis::X);
    }
  }
  return result;
}

double covariance(const QuadExpr& a, const QuadExpr& b,
                  const SourceRegistry& registry, bool include_offsets) {
  // Validate every referenced source up front so that dangling ids are
  // reported even when they do not pair up across the two expressions.
  for (const QuadExpr::Term& t : a.terms()) (void)registry.kind(t.source);
  for (const QuadExpr::Term& t : b.terms()) (void)registry.kind(t.source);

  double result = include_offsets ? a.offset() * b.offset() : 0.0;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t i = 0, j = 0;
  while (i < ta.size() && j < tb.size()) {
    const auto ka = std::make_pair(ta[i].source, ta[i].axis);
    const auto kb = std::make_pair(tb[j].source, tb[j].axis);
    if (ka == kb) {
      result += ta[i].coeff * tb[j].coeff * registry.kind(ta[i].source).moment(ta[i].axis);
      ++i;
      ++j;
    } else if (ka < kb) {
      ++i;
    } else {
      ++j;
    }
  }
  return result;
}

double second_moment(const QuadExpr& a, const SourceRegistry& registry,
                     bool include_offset) {
  return covariance(a, a, registry, include_offset);
}

double max_term_delta(const QuadExpr& a, const QuadExpr& b) {
  double worst = std::abs(a.offset() - b.offset());
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t i = 0, j = 0;
  while (i < ta.size() || j < tb.size()) {
    if (j == tb.size()) {
      worst = std::max(worst, std::abs(ta[i].coeff));
      ++i;
    } else if (i == ta.size()) {
      worst = std::max(worst, std::abs(tb[j].coeff));
      ++j;
    } else {
      const auto ka = std::make_pair(ta[i].source, ta[i].axis);
      const auto kb = std::make_pair(tb[j].source, tb[j].axis);
      if (ka == kb) {
        worst = std::max(worst, std::abs(ta[i].coeff - tb[j].coeff));
        ++i;
        ++j;
      } else if (ka < kb) {
        worst = std::max(worst, std::abs(ta[i].coeff));
        ++i;
      } else {
        worst = std::max(worst, std::abs(tb[j].coeff));
        ++j;
      }
    }
  }
  return worst;
}

}  // namespace cvc
