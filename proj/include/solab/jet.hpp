#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace solab {

/// Value of a scalar function together with its partial derivatives up to order 3.
///
/// Only the canonical (sorted) multi-index of each symmetric partial is stored:
/// `grad` has n entries, the order-2 block n(n+1)/2, the order-3 block n(n+1)(n+2)/6.
/// Blocks beyond `order()` are absent. Binary operations truncate to the lower order
/// of their operands.
class Jet3 {
public:
    static constexpr int kMaxOrder = 3;

    Jet3() = default;

    static Jet3 constant(std::size_t dim, int order, double value);
    /// The coordinate function x_index, valued `value` at the expansion point.
    static Jet3 variable(std::size_t dim, int order, std::size_t index, double value);

    std::size_t dim() const noexcept { return dim_; }
    int order() const noexcept { return order_; }

    double value() const noexcept { return data_[0]; }
    double d(std::size_t i) const;
    double d(std::size_t i, std::size_t j) const;
    double d(std::size_t i, std::size_t j, std::size_t k) const;

    std::span<const double> grad() const;
    std::span<const double> hess() const;   // packed, canonical i <= j
    std::span<const double> third() const;  // packed, canonical i <= j <= k

    /// Partial derivative in direction i as a jet of one lower order.
    Jet3 derivative(std::size_t i) const;
    Jet3 truncated(int order) const;

    /// Chain rule: the jet of g(a) given g and its first three derivatives at a.value().
    Jet3 compose(double g0, double g1, double g2, double g3) const;

    Jet3& operator+=(const Jet3& b);
    Jet3& operator-=(const Jet3& b);
    Jet3& operator*=(double s);

    friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
    friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
    friend Jet3 operator*(const Jet3& a, const Jet3& b);
    friend Jet3 operator*(Jet3 a, double s) { return a *= s; }
    friend Jet3 operator*(double s, Jet3 a) { return a *= s; }
    friend Jet3 operator-(Jet3 a) { return a *= -1.0; }
    friend Jet3 operator+(Jet3 a, double s) {
        a.data_[0] += s;
        return a;
    }

    /// Adds s * a * b into *this (fused, avoids a temporary).
    void add_product(double s, const Jet3& a, const Jet3& b);

    static std::size_t pair_index(std::size_t dim, std::size_t i, std::size_t j);
    static std::size_t triple_index(std::size_t dim, std::size_t i, std::size_t j, std::size_t k);
    static std::size_t storage_size(std::size_t dim, int order);

private:
    Jet3(std::size_t dim, int order);

    std::size_t offset2() const noexcept { return 1 + dim_; }
    std::size_t offset3() const noexcept { return 1 + dim_ + dim_ * (dim_ + 1) / 2; }

    std::size_t dim_ = 0;
    int order_ = 0;
    std::vector<double> data_{0.0};
};

Jet3 reciprocal(const Jet3& a);  // caller guarantees a.value() != 0
Jet3 operator/(const Jet3& a, const Jet3& b);

} // namespace solab
