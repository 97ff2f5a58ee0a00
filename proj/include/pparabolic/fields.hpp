#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pparabolic/error.hpp"
#include "pparabolic/spacetime.hpp"

namespace pparabolic {

/// Symmetric n x n matrix stored as its row-major upper triangle.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : n_(n), upper_(static_cast<std::size_t>(n * (n + 1) / 2), 0.0) {}
    SymMatrix(int n, std::initializer_list<double> upper) : n_(n), upper_(upper) {
        require(upper_.size() == static_cast<std::size_t>(n * (n + 1) / 2), ErrorCode::InvalidParameter,
                "SymMatrix: wrong number of upper-triangle entries");
    }

    static SymMatrix identity(int n) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }

    int dim() const { return n_; }

    double operator()(int i, int j) const { return upper_[index(i, j)]; }
    double& at(int i, int j) { return upper_[index(i, j)]; }

    double trace() const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += (*this)(i, i);
        return s;
    }

    /// <M v, v>
    double quadratic_form(std::span<const double> v) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) {
            s += (*this)(i, i) * v[i] * v[i];
            for (int j = i + 1; j < n_; ++j) s += 2.0 * (*this)(i, j) * v[i] * v[j];
        }
        return s;
    }

    std::span<const double> upper() const { return upper_; }

private:
    std::size_t index(int i, int j) const {
        if (i > j) std::swap(i, j);
        // offset of row i in the packed upper triangle
        return static_cast<std::size_t>(i * n_ - i * (i - 1) / 2 + (j - i));
    }

    int n_ = 0;
    std::vector<double> upper_;
};

/// Second-order data of a field at a point: value, time derivative, spatial
/// gradient and spatial Hessian.
struct Jet2 {
    double value = 0.0;
    double dt = 0.0;
    std::vector<double> grad;
    SymMatrix hess;

    Jet2() = default;
    explicit Jet2(int n) : grad(static_cast<std::size_t>(n), 0.0), hess(n) {}

    int dim() const { return static_cast<int>(grad.size()); }

    double grad_norm() const {
        double s = 0.0;
        for (double g : grad) s += g * g;
        return std::sqrt(s);
    }

    static Jet2 constant(int n, double c) {
        Jet2 j(n);
        j.value = c;
        return j;
    }
};

namespace jet {

inline Jet2 add(const Jet2& a, const Jet2& b, double sign = 1.0) {
    Jet2 r = a;
    r.value += sign * b.value;
    r.dt += sign * b.dt;
    for (int i = 0; i < a.dim(); ++i) {
        r.grad[i] += sign * b.grad[i];
        for (int j = i; j < a.dim(); ++j) r.hess.at(i, j) += sign * b.hess(i, j);
    }
    return r;
}

inline Jet2 mul(const Jet2& a, const Jet2& b) {
    const int n = a.dim();
    Jet2 r(n);
    r.value = a.value * b.value;
    r.dt = a.dt * b.value + a.value * b.dt;
    for (int i = 0; i < n; ++i) {
        r.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
        for (int j = i; j < n; ++j)
            r.hess.at(i, j) = a.hess(i, j) * b.value + a.value * b.hess(i, j) + a.grad[i] * b.grad[j] +
                              a.grad[j] * b.grad[i];
    }
    return r;
}

/// g(a) given g, g', g'' at a.value.
inline Jet2 compose(const Jet2& a, double g0, double g1, double g2) {
    const int n = a.dim();
    Jet2 r(n);
    r.value = g0;
    r.dt = g1 * a.dt;
    for (int i = 0; i < n; ++i) {
        r.grad[i] = g1 * a.grad[i];
        for (int j = i; j < n; ++j) r.hess.at(i, j) = g1 * a.hess(i, j) + g2 * a.grad[i] * a.grad[j];
    }
    return r;
}

inline Jet2 scale(const Jet2& a, double c) { return compose(a, c * a.value, c, 0.0); }

} // namespace jet

namespace detail {

enum class Op {
    Const,
    Coord,
    Time,
    NormSq,
    Norm,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,
    Exp,
    Log,
    Abs,
    Sin,
    Cos,
    Min,
    Max,
};

struct Node {
    Op op = Op::Const;
    double c = 0.0;              // constant value, exponent, or coordinate index
    std::vector<double> center;  // for NormSq / Norm
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

[[noreturn]] inline void singular(const char* what) { throw Error(ErrorCode::SingularPoint, what); }

inline bool is_integer(double q) { return std::floor(q) == q; }

inline double eval_value(const Node& nd, const SpacetimePoint& p) {
    switch (nd.op) {
    case Op::Const: return nd.c;
    case Op::Coord: {
        const int i = static_cast<int>(nd.c);
        if (i >= p.n) throw Error(ErrorCode::InvalidParameter, "coordinate index exceeds point dimension");
        return p.x[i];
    }
    case Op::Time: return p.t;
    case Op::NormSq:
    case Op::Norm: {
        double s = 0.0;
        for (int i = 0; i < p.n; ++i) {
            const double ci = i < static_cast<int>(nd.center.size()) ? nd.center[i] : 0.0;
            s += (p.x[i] - ci) * (p.x[i] - ci);
        }
        if (nd.op == Op::NormSq) return s;
        if (s == 0.0) singular("|x - c| at its center");
        return std::sqrt(s);
    }
    case Op::Add: return eval_value(*nd.a, p) + eval_value(*nd.b, p);
    case Op::Sub: return eval_value(*nd.a, p) - eval_value(*nd.b, p);
    case Op::Mul: return eval_value(*nd.a, p) * eval_value(*nd.b, p);
    case Op::Div: {
        const double den = eval_value(*nd.b, p);
        if (den == 0.0) singular("division by zero");
        return eval_value(*nd.a, p) / den;
    }
    case Op::Neg: return -eval_value(*nd.a, p);
    case Op::Pow: {
        const double base = eval_value(*nd.a, p);
        const double q = nd.c;
        if (base < 0.0 && !is_integer(q)) singular("non-integer power of a negative value");
        if (base == 0.0 && q < 0.0) singular("negative power of zero");
        return std::pow(base, q);
    }
    case Op::Exp: return std::exp(eval_value(*nd.a, p));
    case Op::Log: {
        const double v = eval_value(*nd.a, p);
        if (!(v > 0.0)) singular("log of a nonpositive value");
        return std::log(v);
    }
    case Op::Abs: {
        const double v = eval_value(*nd.a, p);
        if (v == 0.0) singular("|.| at zero");
        return std::abs(v);
    }
    case Op::Sin: return std::sin(eval_value(*nd.a, p));
    case Op::Cos: return std::cos(eval_value(*nd.a, p));
    case Op::Min: return std::min(eval_value(*nd.a, p), eval_value(*nd.b, p));
    case Op::Max: return std::max(eval_value(*nd.a, p), eval_value(*nd.b, p));
    }
    return 0.0;
}

inline Jet2 eval_jet(const Node& nd, const SpacetimePoint& p) {
    const int n = p.n;
    switch (nd.op) {
    case Op::Const: return Jet2::constant(n, nd.c);
    case Op::Coord: {
        const int i = static_cast<int>(nd.c);
        if (i >= n) throw Error(ErrorCode::InvalidParameter, "coordinate index exceeds point dimension");
        Jet2 r(n);
        r.value = p.x[i];
        r.grad[i] = 1.0;
        return r;
    }
    case Op::Time: {
        Jet2 r(n);
        r.value = p.t;
        r.dt = 1.0;
        return r;
    }
    case Op::NormSq: {
        Jet2 r(n);
        for (int i = 0; i < n; ++i) {
            const double ci = i < static_cast<int>(nd.center.size()) ? nd.center[i] : 0.0;
            const double d = p.x[i] - ci;
            r.value += d * d;
            r.grad[i] = 2.0 * d;
            r.hess.at(i, i) = 2.0;
        }
        return r;
    }
    case Op::Norm: {
        Node sq = nd;
        sq.op = Op::NormSq;
        const Jet2 s = eval_jet(sq, p);
        if (s.value == 0.0) singular("|x - c| at its center");
        const double r = std::sqrt(s.value);
        return jet::compose(s, r, 0.5 / r, -0.25 / (r * s.value));
    }
    case Op::Add: return jet::add(eval_jet(*nd.a, p), eval_jet(*nd.b, p));
    case Op::Sub: return jet::add(eval_jet(*nd.a, p), eval_jet(*nd.b, p), -1.0);
    case Op::Mul: return jet::mul(eval_jet(*nd.a, p), eval_jet(*nd.b, p));
    case Op::Div: {
        const Jet2 den = eval_jet(*nd.b, p);
        const double v = den.value;
        if (v == 0.0) singular("division by zero");
        const Jet2 inv = jet::compose(den, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
        return jet::mul(eval_jet(*nd.a, p), inv);
    }
    case Op::Neg: return jet::scale(eval_jet(*nd.a, p), -1.0);
    case Op::Pow: {
        const Jet2 base = eval_jet(*nd.a, p);
        const double v = base.value;
        const double q = nd.c;
        if (v < 0.0 && !is_integer(q)) singular("non-integer power of a negative value");
        if (v == 0.0 && !(q == 0.0 || q == 1.0 || q >= 2.0)) singular("power not twice differentiable at zero");
        if (q == 0.0) return Jet2::constant(n, 1.0);
        const double g0 = std::pow(v, q);
        const double g1 = q * std::pow(v, q - 1.0);
        const double g2 = (q == 1.0) ? 0.0 : q * (q - 1.0) * std::pow(v, q - 2.0);
        return jet::compose(base, g0, g1, g2);
    }
    case Op::Exp: {
        const Jet2 a = eval_jet(*nd.a, p);
        const double e = std::exp(a.value);
        return jet::compose(a, e, e, e);
    }
    case Op::Log: {
        const Jet2 a = eval_jet(*nd.a, p);
        const double v = a.value;
        if (!(v > 0.0)) singular("log of a nonpositive value");
        return jet::compose(a, std::log(v), 1.0 / v, -1.0 / (v * v));
    }
    case Op::Abs: {
        const Jet2 a = eval_jet(*nd.a, p);
        if (a.value == 0.0) singular("|.| at zero");
        const double s = a.value > 0.0 ? 1.0 : -1.0;
        return jet::compose(a, std::abs(a.value), s, 0.0);
    }
    case Op::Sin: {
        const Jet2 a = eval_jet(*nd.a, p);
        return jet::compose(a, std::sin(a.value), std::cos(a.value), -std::sin(a.value));
    }
    case Op::Cos: {
        const Jet2 a = eval_jet(*nd.a, p);
        return jet::compose(a, std::cos(a.value), -std::sin(a.value), -std::cos(a.value));
    }
    case Op::Min:
    case Op::Max: {
        Jet2 a = eval_jet(*nd.a, p);
        Jet2 b = eval_jet(*nd.b, p);
        const bool take_a = (nd.op == Op::Min) ? (a.value <= b.value) : (a.value >= b.value);
        return take_a ? a : b;
    }
    }
    return Jet2(n);
}

inline bool depends_on_point(const Node& nd) {
    switch (nd.op) {
    case Op::Const: return false;
    case Op::Coord:
    case Op::Time:
    case Op::NormSq:
    case Op::Norm: return true;
    default:
        return (nd.a && depends_on_point(*nd.a)) || (nd.b && depends_on_point(*nd.b));
    }
}

} // namespace detail

/// Closed-form scalar field on space-time, represented as an immutable
/// expression tree. Evaluation returns exact derivatives up to second order
/// in space and first order in time.
class ScalarField {
public:
    ScalarField() : ScalarField(make_const(0.0)) {}
    ScalarField(double c) : ScalarField(make_const(c)) {}  // NOLINT(google-explicit-constructor)

    double value(const SpacetimePoint& p) const { return detail::eval_value(*node_, p); }
    Jet2 jet(const SpacetimePoint& p) const { return detail::eval_jet(*node_, p); }

    /// True when the field has no dependence on x or t.
    bool is_constant() const { return !detail::depends_on_point(*node_); }

    static ScalarField constant(double c) { return ScalarField(make_const(c)); }
    static ScalarField coord(int i) {
        detail::Node nd;
        nd.op = detail::Op::Coord;
        nd.c = i;
        return ScalarField(std::make_shared<const detail::Node>(std::move(nd)));
    }
    static ScalarField time() {
        detail::Node nd;
        nd.op = detail::Op::Time;
        return ScalarField(std::make_shared<const detail::Node>(std::move(nd)));
    }
    /// |x - center|^2; smooth everywhere.
    static ScalarField norm_sq(std::vector<double> center = {}) {
        detail::Node nd;
        nd.op = detail::Op::NormSq;
        nd.center = std::move(center);
        return ScalarField(std::make_shared<const detail::Node>(std::move(nd)));
    }
    /// |x - center|; singular at the center.
    static ScalarField norm(std::vector<double> center = {}) {
        detail::Node nd;
        nd.op = detail::Op::Norm;
        nd.center = std::move(center);
        return ScalarField(std::make_shared<const detail::Node>(std::move(nd)));
    }

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b) { return binary(detail::Op::Add, a, b); }
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b) { return binary(detail::Op::Sub, a, b); }
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b) { return binary(detail::Op::Mul, a, b); }
    friend ScalarField operator/(const ScalarField& a, const ScalarField& b) { return binary(detail::Op::Div, a, b); }
    friend ScalarField operator-(const ScalarField& a) { return unary(detail::Op::Neg, a); }

    friend ScalarField pow(const ScalarField& a, double q) {
        ScalarField r = unary(detail::Op::Pow, a);
        const_cast<detail::Node&>(*r.node_).c = q;
        return r;
    }
    friend ScalarField exp(const ScalarField& a) { return unary(detail::Op::Exp, a); }
    friend ScalarField log(const ScalarField& a) { return unary(detail::Op::Log, a); }
    friend ScalarField abs(const ScalarField& a) { return unary(detail::Op::Abs, a); }
    friend ScalarField sin(const ScalarField& a) { return unary(detail::Op::Sin, a); }
    friend ScalarField cos(const ScalarField& a) { return unary(detail::Op::Cos, a); }
    friend ScalarField sqrt(const ScalarField& a) { return pow(a, 0.5); }
    /// Pointwise minimum; the jet is taken from the smaller branch.
    friend ScalarField min(const ScalarField& a, const ScalarField& b) { return binary(detail::Op::Min, a, b); }
    friend ScalarField max(const ScalarField& a, const ScalarField& b) { return binary(detail::Op::Max, a, b); }

private:
    explicit ScalarField(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

    static std::shared_ptr<const detail::Node> make_const(double c) {
        detail::Node nd;
        nd.op = detail::Op::Const;
        nd.c = c;
        return std::make_shared<const detail::Node>(std::move(nd));
    }
    static ScalarField unary(detail::Op op, const ScalarField& a) {
        detail::Node nd;
        nd.op = op;
        nd.a = a.node_;
        return ScalarField(std::make_shared<const detail::Node>(std::move(nd)));
    }
    static ScalarField binary(detail::Op op, const ScalarField& a, const ScalarField& b) {
        detail::Node nd;
        nd.op = op;
        nd.a = a.node_;
        nd.b = b.node_;
        return ScalarField(std::make_shared<const detail::Node>(std::move(nd)));
    }

    std::shared_ptr<const detail::Node> node_;
};

inline Jet2 eval_jet(const ScalarField& field, const SpacetimePoint& xi) { return field.jet(xi); }

} // namespace pparabolic
