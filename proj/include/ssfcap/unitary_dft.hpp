#pragma once

// Length-L DFT pair backed by FFTW. Plans are created once (FFTW_ESTIMATE,
// FFTW_UNALIGNED) and executed through the new-array interface, which is
// thread-safe and gives identical results for identical input regardless of
// buffer placement.

#include <cmath>
#include <complex>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace ssfcap {

namespace detail {
// FFTW's planner is not re-entrant.
inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}
} // namespace detail

class UnitaryDft {
public:
    explicit UnitaryDft(int n) : n_(n)
    {
        if (n < 1) throw std::invalid_argument("DFT length must be >= 1");
        std::vector<std::complex<double>> scratch(static_cast<std::size_t>(n));
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        std::lock_guard lock(detail::fftw_planner_mutex());
        forward_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, flags);
        if (!forward_ || !backward_) throw std::runtime_error("FFTW planning failed");
    }

    UnitaryDft(const UnitaryDft&) = delete;
    UnitaryDft& operator=(const UnitaryDft&) = delete;

    ~UnitaryDft()
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    int size() const { return n_; }

    /// In-place unnormalized sum_l x_l e^{-j 2 pi l m / n}.
    void forward_unscaled(std::span<std::complex<double>> x) const { execute(forward_, x); }

    /// In-place unnormalized sum_m X_m e^{+j 2 pi l m / n}.
    void backward_unscaled(std::span<std::complex<double>> x) const { execute(backward_, x); }

    /// Unitary forward transform, entries (1/sqrt n) e^{-j 2 pi l m / n}.
    void forward(std::span<std::complex<double>> x) const
    {
        forward_unscaled(x);
        scale(x);
    }

    /// Unitary inverse transform.
    void backward(std::span<std::complex<double>> x) const
    {
        backward_unscaled(x);
        scale(x);
    }

private:
    void execute(fftw_plan plan, std::span<std::complex<double>> x) const
    {
        if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("DFT length mismatch");
        auto* buf = reinterpret_cast<fftw_complex*>(x.data());
        fftw_execute_dft(plan, buf, buf);
    }

    void scale(std::span<std::complex<double>> x) const
    {
        const double s = 1.0 / std::sqrt(static_cast<double>(n_));
        for (auto& v : x) v *= s;
    }

    int n_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

} // namespace ssfcap
