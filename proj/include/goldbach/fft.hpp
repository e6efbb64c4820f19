#pragma once

// Thin RAII layer over FFTW for the real-input transforms used by the
// convolution and grid-evaluation paths. Planning is serialized (FFTW's
// planner is not re-entrant); execution on fresh fftw_malloc'd buffers is
// thread-safe and, with FFTW_ESTIMATE, bit-reproducible.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <cstring>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace goldbach::fft {

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

template <typename T>
struct FftwDeleter {
    void operator()(T* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <typename T>
FftwBuffer<T> allocate(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * (n ? n : 1)));
    if (!p) throw std::bad_alloc();
    std::memset(static_cast<void*>(p), 0, sizeof(T) * (n ? n : 1));
    return FftwBuffer<T>(p);
}

class Plan {
public:
    Plan() = default;
    explicit Plan(fftw_plan p) : p_(p) {}
    Plan(Plan&& o) noexcept : p_(o.p_) { o.p_ = nullptr; }
    Plan& operator=(Plan&& o) noexcept {
        std::swap(p_, o.p_);
        return *this;
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        if (p_) {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(p_);
        }
    }
    fftw_plan get() const { return p_; }

private:
    fftw_plan p_ = nullptr;
};

inline std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

// Half spectrum (n/2 + 1 bins) of a zero-padded real sequence of length n.
class RealSpectrum {
public:
    RealSpectrum(std::span<const double> x, std::size_t n) : n_(n), bins_(allocate<fftw_complex>(n / 2 + 1)) {
        auto in = allocate<double>(n);
        std::memcpy(in.get(), x.data(), sizeof(double) * std::min(x.size(), n));
        Plan plan;
        {
            std::lock_guard lock(planner_mutex());
            plan = Plan(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), bins_.get(), FFTW_ESTIMATE));
        }
        fftw_execute(plan.get());
    }

    std::size_t length() const { return n_; }
    std::size_t bins() const { return n_ / 2 + 1; }
    std::complex<double> operator[](std::size_t i) const { return {bins_[i][0], bins_[i][1]}; }

    // Circular convolution with another spectrum of the same length,
    // returned in the time domain (normalized).
    std::vector<double> convolve(const RealSpectrum& other) const {
        return product_inverse(other, false);
    }

    // Circular cross-correlation: out[m] = sum_j this[j + m] * other[j].
    std::vector<double> correlate(const RealSpectrum& other) const {
        return product_inverse(other, true);
    }

private:
    std::vector<double> product_inverse(const RealSpectrum& other, bool conjugate_other) const {
        const std::size_t nb = bins();
        auto spec = allocate<fftw_complex>(nb);
        for (std::size_t i = 0; i < nb; ++i) {
            std::complex<double> a{bins_[i][0], bins_[i][1]};
            std::complex<double> b = other[i];
            if (conjugate_other) b = std::conj(b);
            const auto c = a * b;
            spec[i][0] = c.real();
            spec[i][1] = c.imag();
        }
        auto out = allocate<double>(n_);
        Plan plan;
        {
            std::lock_guard lock(planner_mutex());
            plan = Plan(fftw_plan_dft_c2r_1d(static_cast<int>(n_), spec.get(), out.get(), FFTW_ESTIMATE));
        }
        fftw_execute(plan.get());
        std::vector<double> r(n_);
        const double scale = 1.0 / static_cast<double>(n_);
        for (std::size_t i = 0; i < n_; ++i) r[i] = out[i] * scale;
        return r;
    }

    std::size_t n_;
    FftwBuffer<fftw_complex> bins_;
};

// Values of the trigonometric polynomial sum_n coeffs[n] e(n t / T) at all
// grid points t = 0..T-1. Requires coeffs.size() <= T for exactness.
inline std::vector<std::complex<double>> evaluate_on_grid(std::span<const double> coeffs, std::size_t T) {
    RealSpectrum spec(coeffs, T);
    std::vector<std::complex<double>> v(T);
    // The forward transform carries e(-nt/T); conjugate to flip the sign.
    for (std::size_t t = 0; t < T; ++t) v[t] = t < spec.bins() ? std::conj(spec[t]) : spec[T - t];
    return v;
}

}  // namespace goldbach::fft
