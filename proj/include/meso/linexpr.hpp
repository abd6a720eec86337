#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "meso/errors.hpp"

namespace meso {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { continuous, binary };

// Lightweight handle to a model variable. Bounds/name are a snapshot taken at
// declaration time; the registry owning the variable remains the source of truth.
struct VarRef {
    int index = -1;
    VarKind kind = VarKind::continuous;
    double lower = 0.0;
    double upper = 0.0;
    std::string name;

    bool valid() const { return index >= 0; }
};

// Sparse affine expression: sum(coeff_i * var_i) + constant.
// Terms are kept canonical (sorted by variable index, merged, zero-free).
class LinExpr {
public:
    LinExpr() = default;
    LinExpr(double c) : constant_(c) {}           // NOLINT: implicit by design
    LinExpr(const VarRef& v) {                    // NOLINT: implicit by design
        if (!v.valid()) throw AssemblyError("expression references an invalid VarRef");
        terms_.emplace_back(v.index, 1.0);
    }

    static LinExpr term(const VarRef& v, double coeff) {
        LinExpr e;
        if (!v.valid()) throw AssemblyError("expression references an invalid VarRef");
        if (coeff != 0.0) e.terms_.emplace_back(v.index, coeff);
        return e;
    }

    const std::vector<std::pair<int, double>>& terms() const { return terms_; }
    double constant() const { return constant_; }
    bool is_constant() const { return terms_.empty(); }

    LinExpr& operator+=(const LinExpr& o) {
        constant_ += o.constant_;
        if (o.terms_.empty()) return *this;
        if (terms_.empty()) { terms_ = o.terms_; return *this; }
        std::vector<std::pair<int, double>> merged;
        merged.reserve(terms_.size() + o.terms_.size());
        size_t i = 0, j = 0;
        while (i < terms_.size() || j < o.terms_.size()) {
            if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
                merged.push_back(terms_[i++]);
            } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
                merged.push_back(o.terms_[j++]);
            } else {
                double c = terms_[i].second + o.terms_[j].second;
                if (c != 0.0) merged.emplace_back(terms_[i].first, c);
                ++i; ++j;
            }
        }
        terms_ = std::move(merged);
        return *this;
    }
    LinExpr& operator-=(const LinExpr& o) { return *this += o * -1.0; }
    LinExpr& operator*=(double s) {
        if (s == 0.0) { terms_.clear(); constant_ = 0.0; return *this; }
        for (auto& t : terms_) t.second *= s;
        constant_ *= s;
        return *this;
    }

    friend LinExpr operator+(LinExpr a, const LinExpr& b) { a += b; return a; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { a -= b; return a; }
    friend LinExpr operator*(LinExpr a, double s) { a *= s; return a; }
    friend LinExpr operator*(double s, LinExpr a) { a *= s; return a; }
    friend LinExpr operator-(LinExpr a) { a *= -1.0; return a; }

    double value(std::span<const double> x) const {
        double v = constant_;
        for (const auto& [idx, c] : terms_) v += c * x[static_cast<size_t>(idx)];
        return v;
    }

    void check_finite() const {
        if (!std::isfinite(constant_)) throw AssemblyError("expression has non-finite constant");
        for (const auto& [idx, c] : terms_)
            if (!std::isfinite(c))
                throw AssemblyError("expression has non-finite coefficient on column " + std::to_string(idx));
    }

private:
    std::vector<std::pair<int, double>> terms_;
    double constant_ = 0.0;
};

enum class Sense { le, eq, ge };

// Linear constraint in normalized form: terms(lhs) <sense> rhs, lhs constant folded into rhs.
struct LinConstraint {
    LinExpr lhs;     // constant part always 0 after normalization
    Sense sense = Sense::le;
    double rhs = 0.0;
    std::string name;

    static LinConstraint make(LinExpr lhs, Sense sense, LinExpr rhs, std::string name = {}) {
        LinExpr diff = std::move(lhs) - rhs;
        diff.check_finite();
        LinConstraint c;
        c.rhs = -diff.constant();
        c.lhs = diff - LinExpr(diff.constant());
        c.sense = sense;
        c.name = std::move(name);
        return c;
    }

    double activity(std::span<const double> x) const { return lhs.value(x); }
    double violation(std::span<const double> x) const {
        double a = activity(x);
        switch (sense) {
            case Sense::le: return a - rhs;
            case Sense::ge: return rhs - a;
            case Sense::eq: return std::abs(a - rhs);
        }
        return 0.0;
    }
};

inline LinConstraint le(LinExpr lhs, LinExpr rhs, std::string name = {}) {
    return LinConstraint::make(std::move(lhs), Sense::le, std::move(rhs), std::move(name));
}
inline LinConstraint ge(LinExpr lhs, LinExpr rhs, std::string name = {}) {
    return LinConstraint::make(std::move(lhs), Sense::ge, std::move(rhs), std::move(name));
}
inline LinConstraint eq(LinExpr lhs, LinExpr rhs, std::string name = {}) {
    return LinConstraint::make(std::move(lhs), Sense::eq, std::move(rhs), std::move(name));
}

} // namespace meso
