#pragma once

#include "solab/errors.hpp"
#include "solab/jet.hpp"

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace solab {

enum class Slot { Up, Down };
using Variance = std::vector<Slot>;

std::string variance_string(const Variance& v);  // e.g. "(1,2)"

inline std::size_t ipow(std::size_t n, std::size_t k) {
    std::size_t r = 1;
    while (k-- > 0) r *= n;
    return r;
}

/// Dense row-major tensor components in a coordinate frame; slot s has stride n^(rank-1-s).
template <class T>
class TensorData {
public:
    TensorData() = default;
    TensorData(std::size_t dim, Variance variance, std::vector<T> comps)
        : dim_(dim), variance_(std::move(variance)), comps_(std::move(comps)) {
        if (comps_.size() != ipow(dim_, variance_.size())) {
            throw InvalidArgument("component count does not match dim^rank");
        }
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t rank() const noexcept { return variance_.size(); }
    const Variance& variance() const noexcept { return variance_; }
    std::span<const T> components() const noexcept { return comps_; }
    std::span<T> components() noexcept { return comps_; }
    std::size_t size() const noexcept { return comps_.size(); }

    std::size_t flat(std::initializer_list<std::size_t> idx) const {
        std::size_t f = 0;
        for (std::size_t i : idx) f = f * dim_ + i;
        return f;
    }
    std::size_t flat(std::span<const std::size_t> idx) const {
        std::size_t f = 0;
        for (std::size_t i : idx) f = f * dim_ + i;
        return f;
    }

    template <class... I>
    T& operator()(I... idx) {
        return comps_[flat({static_cast<std::size_t>(idx)...})];
    }
    template <class... I>
    const T& operator()(I... idx) const {
        return comps_[flat({static_cast<std::size_t>(idx)...})];
    }
    T& operator[](std::size_t f) { return comps_[f]; }
    const T& operator[](std::size_t f) const { return comps_[f]; }

private:
    std::size_t dim_ = 0;
    Variance variance_;
    std::vector<T> comps_;
};

using JetTensor = TensorData<Jet3>;

/// Numeric tensor at a single point.
class TensorAtPoint : public TensorData<double> {
public:
    TensorAtPoint() = default;
    TensorAtPoint(std::size_t dim, Variance variance)
        : TensorData<double>(dim, variance, std::vector<double>(ipow(dim, variance.size()), 0.0)) {}
    TensorAtPoint(std::size_t dim, Variance variance, std::vector<double> comps)
        : TensorData<double>(dim, std::move(variance), std::move(comps)) {}

    static TensorAtPoint identity(std::size_t dim);  // (1,1) Kronecker endomorphism

    TensorAtPoint& operator+=(const TensorAtPoint& o);
    TensorAtPoint& operator-=(const TensorAtPoint& o);
    TensorAtPoint& operator*=(double s);
    friend TensorAtPoint operator+(TensorAtPoint a, const TensorAtPoint& b) { return a += b; }
    friend TensorAtPoint operator-(TensorAtPoint a, const TensorAtPoint& b) { return a -= b; }
    friend TensorAtPoint operator*(TensorAtPoint a, double s) { return a *= s; }
    friend TensorAtPoint operator*(double s, TensorAtPoint a) { return a *= s; }

    double max_abs() const;
    /// Plain Euclidean norm of the component array (coordinate-dependent; use norm2 for the metric norm).
    double frobenius() const;
};

/// Values (order-0 part) of a jet tensor.
TensorAtPoint values_of(const JetTensor& t);

/// Reorders slots: result slot s is input slot perm[s].
TensorAtPoint permute_slots(const TensorAtPoint& t, std::span<const std::size_t> perm);

} // namespace solab
