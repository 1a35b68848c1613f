#pragma once

// Thin RAII layer over FFTW's real-to-complex transforms.
// Plans use FFTW_ESTIMATE so that results are bit-reproducible run to run.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "burgers/grid.hpp"

namespace burgers {

using cplx = std::complex<double>;

// FFTW's planner is not thread-safe; every plan creation and destruction holds this lock.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

class RealFFT {
public:
    // dims in row-major order; the last axis is halved in spectral space.
    explicit RealFFT(std::vector<int> dims) : dims_(std::move(dims)) {
        nreal_ = 1;
        for (int d : dims_) nreal_ *= static_cast<std::size_t>(d);
        nspec_ = nreal_ / dims_.back() * (dims_.back() / 2 + 1);
        real_.reset(fftw_alloc_real(nreal_));
        spec_.reset(fftw_alloc_complex(nspec_));
        const int rank = static_cast<int>(dims_.size());
        std::lock_guard<std::mutex> lk(fftw_planner_mutex());
        fwd_ = fftw_plan_dft_r2c(rank, dims_.data(), real_.get(), spec_.get(), FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r(rank, dims_.data(), spec_.get(), real_.get(), FFTW_ESTIMATE);
    }
    ~RealFFT() {
        std::lock_guard<std::mutex> lk(fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    RealFFT(const RealFFT&) = delete;
    RealFFT& operator=(const RealFFT&) = delete;

    double* real() { return real_.get(); }
    cplx* spec() { return reinterpret_cast<cplx*>(spec_.get()); }
    std::size_t real_size() const { return nreal_; }
    std::size_t spec_size() const { return nspec_; }
    const std::vector<int>& dims() const { return dims_; }

    void forward() { fftw_execute(fwd_); }
    // Unnormalized: forward then backward multiplies by real_size().
    // c2r destroys its input, which callers here never reuse.
    void backward() { fftw_execute(bwd_); }

private:
    struct RealFree {
        void operator()(double* p) const { fftw_free(p); }
    };
    struct CplxFree {
        void operator()(fftw_complex* p) const { fftw_free(p); }
    };
    std::vector<int> dims_;
    std::size_t nreal_ = 0, nspec_ = 0;
    std::unique_ptr<double, RealFree> real_;
    std::unique_ptr<fftw_complex, CplxFree> spec_;
    fftw_plan fwd_ = nullptr, bwd_ = nullptr;
};

// Periodic spectral derivatives on an n x n grid with spacing h.
class SpectralDiff2D {
public:
    SpectralDiff2D(int n, double h) : n_(n), h_(h), fft_({n, n}) {}

    // out = d/dx_axis of in (axis 0 is the slow index), Nyquist mode dropped.
    void derivative(const double* in, double* out, int axis) { apply(in, out, axis, -1); }
    void laplacian(const double* in, double* out) { apply(in, out, -1, -1); }
    // Second derivative d^2/(dx_a dx_b).
    void second(const double* in, double* out, int a, int b) { apply(in, out, a, b); }

private:
    void apply(const double* in, double* out, int a, int b) {
        const std::size_t N = fft_.real_size();
        std::copy(in, in + N, fft_.real());
        fft_.forward();
        cplx* s = fft_.spec();
        const int nc = n_ / 2 + 1;
        const double L = n_ * h_;
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < nc; ++j) {
                const int mi = signed_mode(i, n_), mj = j;
                const double k[2] = {2 * pi * mi / L, 2 * pi * mj / L};
                const bool nyq[2] = {i == n_ / 2, j == n_ / 2};
                cplx m;
                if (a < 0) {
                    m = -(k[0] * k[0] + k[1] * k[1]);
                } else if (b < 0) {
                    m = nyq[a] ? 0.0 : cplx(0, k[a]);
                } else if (a == b) {
                    m = -k[a] * k[a];
                } else {
                    m = (nyq[a] || nyq[b]) ? 0.0 : -k[a] * k[b];
                }
                s[static_cast<std::size_t>(i) * nc + j] *= m / static_cast<double>(N);
            }
        fft_.backward();
        std::copy(fft_.real(), fft_.real() + N, out);
    }

    int n_;
    double h_;
    RealFFT fft_;
};

// Spectral derivatives on a Grid3D-shaped array stored [k][i][j] (k vertical).
// Axis 0, 1 are horizontal (period 2R), axis 2 is vertical (period 2Z).
class SpectralDiff3D {
public:
    SpectralDiff3D(int n, double R, int n3, double Z) : n_(n), n3_(n3), fft_({n3, n, n}) {
        kh_.resize(n);
        for (int i = 0; i < n; ++i) kh_[i] = pi * signed_mode(i, n) / R;
        kv_.resize(n3);
        for (int k = 0; k < n3; ++k) kv_[k] = pi * signed_mode(k, n3) / Z;
    }

    // Load a field; subsequent emit calls reuse its spectrum.
    void load(const double* in) {
        std::copy(in, in + fft_.real_size(), fft_.real());
        fft_.forward();
        spec_.assign(fft_.spec(), fft_.spec() + fft_.spec_size());
    }
    // d/dx_axis of the loaded field.
    void derivative(int axis, double* out) { emit(out, [axis](double k0, double k1, double k2, bool nyq[3]) {
        const double k[3] = {k0, k1, k2};
        return nyq[axis] ? cplx(0) : cplx(0, k[axis]);
    }); }
    void laplacian(double* out) {
        emit(out, [](double k0, double k1, double k2, bool*) { return cplx(-(k0 * k0 + k1 * k1 + k2 * k2)); });
    }
    // Horizontal Laplacian only.
    void laplacian_h(double* out) {
        emit(out, [](double k0, double k1, double, bool*) { return cplx(-(k0 * k0 + k1 * k1)); });
    }

private:
    template <class F>
    void emit(double* out, F&& mult) {
        const int nc = n_ / 2 + 1;
        cplx* s = fft_.spec();
        const double norm = 1.0 / static_cast<double>(fft_.real_size());
        for (int k = 0; k < n3_; ++k)
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < nc; ++j) {
                    bool nyq[3] = {i == n_ / 2, j == n_ / 2, k == n3_ / 2};
                    const std::size_t q = (static_cast<std::size_t>(k) * n_ + i) * nc + j;
                    s[q] = spec_[q] * mult(kh_[i], kh_[j], kv_[k], nyq) * norm;
                }
        fft_.backward();
        std::copy(fft_.real(), fft_.real() + fft_.real_size(), out);
    }

    int n_, n3_;
    RealFFT fft_;
    std::vector<double> kh_, kv_;
    std::vector<cplx> spec_;
};

}  // namespace burgers
