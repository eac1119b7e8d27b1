#include "solab/jet.hpp"

#include "solab/errors.hpp"

#include <algorithm>
#include <utility>

namespace solab {

namespace {

void sort3(std::size_t& i, std::size_t& j, std::size_t& k) {
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
}

} // namespace

std::size_t Jet3::pair_index(std::size_t n, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * (2 * n - i + 1) / 2 + (j - i);
}

std::size_t Jet3::triple_index(std::size_t n, std::size_t i, std::size_t j, std::size_t k) {
    sort3(i, j, k);
    std::size_t idx = 0;
    for (std::size_t a = 0; a < i; ++a) {
        const std::size_t m = n - a;
        idx += m * (m + 1) / 2;
    }
    return idx + pair_index(n - i, j - i, k - i);
}

std::size_t Jet3::storage_size(std::size_t n, int order) {
    std::size_t size = 1;
    if (order >= 1) size += n;
    if (order >= 2) size += n * (n + 1) / 2;
    if (order >= 3) size += n * (n + 1) * (n + 2) / 6;
    return size;
}

Jet3::Jet3(std::size_t dim, int order) : dim_(dim), order_(order), data_(storage_size(dim, order), 0.0) {
    if (order < 0 || order > kMaxOrder) {
        throw InvalidArgument("jet order must be in 0..3");
    }
}

Jet3 Jet3::constant(std::size_t dim, int order, double value) {
    Jet3 j(dim, order);
    j.data_[0] = value;
    return j;
}

Jet3 Jet3::variable(std::size_t dim, int order, std::size_t index, double value) {
    Jet3 j(dim, order);
    j.data_[0] = value;
    if (order >= 1) {
        j.data_[1 + index] = 1.0;
    }
    return j;
}

double Jet3::d(std::size_t i) const {
    if (order_ < 1) throw InvalidArgument("jet has no first derivatives");
    return data_[1 + i];
}

double Jet3::d(std::size_t i, std::size_t j) const {
    if (order_ < 2) throw InvalidArgument("jet has no second derivatives");
    return data_[offset2() + pair_index(dim_, i, j)];
}

double Jet3::d(std::size_t i, std::size_t j, std::size_t k) const {
    if (order_ < 3) throw InvalidArgument("jet has no third derivatives");
    return data_[offset3() + triple_index(dim_, i, j, k)];
}

std::span<const double> Jet3::grad() const {
    if (order_ < 1) return {};
    return std::span<const double>(data_).subspan(1, dim_);
}

std::span<const double> Jet3::hess() const {
    if (order_ < 2) return {};
    return std::span<const double>(data_).subspan(offset2(), dim_ * (dim_ + 1) / 2);
}

std::span<const double> Jet3::third() const {
    if (order_ < 3) return {};
    return std::span<const double>(data_).subspan(offset3(), dim_ * (dim_ + 1) * (dim_ + 2) / 6);
}

Jet3 Jet3::truncated(int order) const {
    if (order >= order_) return *this;
    Jet3 r(dim_, order);
    std::copy_n(data_.begin(), r.data_.size(), r.data_.begin());
    return r;
}

Jet3 Jet3::derivative(std::size_t i) const {
    if (order_ < 1) throw InvalidArgument("cannot differentiate an order-0 jet");
    Jet3 r(dim_, order_ - 1);
    r.data_[0] = data_[1 + i];
    if (order_ >= 2) {
        for (std::size_t a = 0; a < dim_; ++a) r.data_[1 + a] = d(i, a);
    }
    if (order_ >= 3) {
        std::size_t idx = r.offset2();
        for (std::size_t a = 0; a < dim_; ++a)
            for (std::size_t b = a; b < dim_; ++b) r.data_[idx++] = d(i, a, b);
    }
    return r;
}

Jet3& Jet3::operator+=(const Jet3& b) {
    if (dim_ != b.dim_) throw InvalidArgument("jet dimension mismatch");
    if (b.order_ < order_) *this = truncated(b.order_);
    for (std::size_t t = 0; t < data_.size(); ++t) data_[t] += b.data_[t];
    return *this;
}

Jet3& Jet3::operator-=(const Jet3& b) {
    if (dim_ != b.dim_) throw InvalidArgument("jet dimension mismatch");
    if (b.order_ < order_) *this = truncated(b.order_);
    for (std::size_t t = 0; t < data_.size(); ++t) data_[t] -= b.data_[t];
    return *this;
}

Jet3& Jet3::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

void Jet3::add_product(double s, const Jet3& a, const Jet3& b) {
    const int ord = std::min({order_, a.order_, b.order_});
    if (ord < order_) *this = truncated(ord);
    const std::size_t n = dim_;
    const double a0 = a.data_[0];
    const double b0 = b.data_[0];
    data_[0] += s * a0 * b0;
    if (ord >= 1) {
        for (std::size_t i = 0; i < n; ++i) data_[1 + i] += s * (a.data_[1 + i] * b0 + a0 * b.data_[1 + i]);
    }
    if (ord >= 2) {
        const std::size_t o2 = offset2();
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j, ++idx) {
                data_[o2 + idx] += s * (a.data_[o2 + idx] * b0 + a0 * b.data_[o2 + idx] +
                                        a.data_[1 + i] * b.data_[1 + j] + a.data_[1 + j] * b.data_[1 + i]);
            }
        }
    }
    if (ord >= 3) {
        const std::size_t o2 = offset2();
        const std::size_t o3 = offset3();
        auto p2 = [n](std::size_t i, std::size_t j) { return pair_index(n, i, j); };
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                for (std::size_t k = j; k < n; ++k, ++idx) {
                    const double ai = a.data_[1 + i], aj = a.data_[1 + j], ak = a.data_[1 + k];
                    const double bi = b.data_[1 + i], bj = b.data_[1 + j], bk = b.data_[1 + k];
                    const double aij = a.data_[o2 + p2(i, j)], aik = a.data_[o2 + p2(i, k)],
                                 ajk = a.data_[o2 + p2(j, k)];
                    const double bij = b.data_[o2 + p2(i, j)], bik = b.data_[o2 + p2(i, k)],
                                 bjk = b.data_[o2 + p2(j, k)];
                    data_[o3 + idx] += s * (a.data_[o3 + idx] * b0 + a0 * b.data_[o3 + idx] + aij * bk + aik * bj +
                                            ajk * bi + ai * bjk + aj * bik + ak * bij);
                }
            }
        }
    }
}

Jet3 operator*(const Jet3& a, const Jet3& b) {
    if (a.dim_ != b.dim_) throw InvalidArgument("jet dimension mismatch");
    Jet3 r(a.dim_, std::min(a.order_, b.order_));
    r.add_product(1.0, a, b);
    return r;
}

Jet3 Jet3::compose(double g0, double g1, double g2, double g3) const {
    const std::size_t n = dim_;
    Jet3 r(n, order_);
    r.data_[0] = g0;
    if (order_ >= 1) {
        for (std::size_t i = 0; i < n; ++i) r.data_[1 + i] = g1 * data_[1 + i];
    }
    if (order_ >= 2) {
        const std::size_t o2 = offset2();
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j, ++idx)
                r.data_[o2 + idx] = g2 * data_[1 + i] * data_[1 + j] + g1 * data_[o2 + idx];
    }
    if (order_ >= 3) {
        const std::size_t o2 = offset2();
        const std::size_t o3 = offset3();
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                for (std::size_t k = j; k < n; ++k, ++idx) {
                    const double ai = data_[1 + i], aj = data_[1 + j], ak = data_[1 + k];
                    const double aij = data_[o2 + pair_index(n, i, j)];
                    const double aik = data_[o2 + pair_index(n, i, k)];
                    const double ajk = data_[o2 + pair_index(n, j, k)];
                    r.data_[o3 + idx] = g3 * ai * aj * ak + g2 * (aij * ak + aik * aj + ajk * ai) + g1 * data_[o3 + idx];
                }
            }
        }
    }
    return r;
}

Jet3 reciprocal(const Jet3& a) {
    const double b = a.value();
    const double r = 1.0 / b;
    return a.compose(r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

Jet3 operator/(const Jet3& a, const Jet3& b) {
    if (b.value() == 0.0) throw InvalidArgument("jet division by zero");
    return a * reciprocal(b);
}

} // namespace solab
