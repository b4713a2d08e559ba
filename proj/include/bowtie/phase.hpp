#ifndef BOWTIE_PHASE_HPP
#define BOWTIE_PHASE_HPP

#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bowtie {

/// An element of Q/Z, written additively, standing for the unit-circle
/// value e^{2*pi*i*q}.  All identities in the cocycle layer are checked
/// with this type; floating point enters only through embed().
class Phase {
public:
    Phase() : num_(0), den_(1) {}

    Phase(std::int64_t num, std::int64_t den) {
        if (den == 0) throw std::invalid_argument("Phase: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        num %= den;
        if (num < 0) num += den;
        const std::int64_t g = std::gcd(num, den);
        num_ = num / g;
        den_ = den / g;
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }

    friend Phase operator+(Phase a, Phase b) {
        return Phase(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Phase operator-(Phase a, Phase b) {
        return Phase(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    Phase operator-() const { return Phase(-num_, den_); }

    Phase& operator+=(Phase o) { *this = *this + o; return *this; }
    Phase& operator-=(Phase o) { *this = *this - o; return *this; }

    friend bool operator==(Phase a, Phase b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(Phase a, Phase b) { return !(a == b); }

    /// Integer multiple, e.g. theta * (m*n) for rotation phases.
    friend Phase operator*(std::int64_t k, Phase p) {
        return Phase(k * p.num_, p.den_);
    }

    std::complex<double> embed() const {
        constexpr double two_pi = 6.283185307179586476925286766559;
        const double t = two_pi * static_cast<double>(num_) / static_cast<double>(den_);
        return {std::cos(t), std::sin(t)};
    }

    /// Reduced fraction of a full turn, e.g. "1/2".
    std::string str() const {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    std::int64_t num_;  // 0 <= num_ < den_, gcd(num_, den_) == 1
    std::int64_t den_;
};

}  // namespace bowtie

#endif
