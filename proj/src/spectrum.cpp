#include "qdual/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "qdual/errors.hpp"
#include "qdual/linalg.hpp"

namespace qdual {

namespace {

// iterative radix-2 decimation-in-time transform, length a power of two
void fft(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const cplx wl = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            cplx w = 1.0;
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

bool power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace

SpectrumResult power_spectrum(const TimeSeries& series) {
    if (!(series.dt > 0.0)) throw ValidationError("power_spectrum: dt must be positive");
    const std::size_t n = series.values.size();
    if (!power_of_two(n)) throw BadLength("power_spectrum: length must be a power of two >= 2");

    std::vector<cplx> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = series.values[j];
    fft(a);

    const std::size_t m = n / 2 + 1;
    SpectrumResult out;
    out.bin_width = 2.0 * std::numbers::pi / (static_cast<double>(n) * series.dt);
    out.freqs.resize(m);
    out.power.resize(m);
    const double scale = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (std::size_t k = 0; k < m; ++k) {
        out.freqs[k] = out.bin_width * static_cast<double>(k);
        const double p = std::norm(a[k]) * scale;
        out.power[k] = (k == 0 || k == n / 2) ? p : 2.0 * p;
    }
    return out;
}

namespace {

// vertex of the parabola through the reciprocal magnitudes of the three bins
// around a maximum; rectangular-window tones land within ~0.09 bin
double subbin_offset(double pm, double p0, double pp) {
    if (!(pm > 0.0) || !(p0 > 0.0) || !(pp > 0.0)) return 0.0;
    const double wm = 1.0 / std::sqrt(pm);
    const double w0 = 1.0 / std::sqrt(p0);
    const double wp = 1.0 / std::sqrt(pp);
    const double a = 0.5 * (wp + wm) - w0;
    const double b = 0.5 * (wp - wm);
    if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b)) return 0.0;
    const double off = -b / (2.0 * a);
    return std::clamp(off, -0.5, 0.5);
}

}  // namespace

PeakList detect_peaks(const SpectrumResult& spec, double rel_threshold) {
    if (!(rel_threshold > 0.0) || rel_threshold > 1.0)
        throw ValidationError("detect_peaks: rel_threshold must be in (0, 1]");
    const std::size_t m = spec.power.size();
    if (m < 3) throw EmptySpectrum("detect_peaks: spectrum has no interior bins");

    double top = 0.0;
    for (std::size_t k = 1; k + 1 < m; ++k) top = std::max(top, spec.power[k]);
    const double floor = rel_threshold * top;

    PeakList peaks;
    for (std::size_t k = 1; k + 1 < m; ++k) {
        const double p = spec.power[k];
        if (p < floor || p == 0.0) continue;
        if (!(p > spec.power[k - 1] && p > spec.power[k + 1])) continue;
        Peak peak;
        peak.height = p;
        const double off = subbin_offset(spec.power[k - 1], p, spec.power[k + 1]);
        peak.freq = spec.freqs[k] + off * spec.bin_width;
        peaks.push_back(peak);
    }
    return peaks;
}

namespace {

double nearest_odd(double freq, double omegaL, int& order) {
    const int n0 = static_cast<int>(std::lround((freq / omegaL - 1.0) / 2.0));
    double best = -1.0;
    for (int n = std::max(0, n0 - 1); n <= n0 + 1; ++n) {
        const double d = std::abs((2.0 * n + 1.0) * omegaL - freq);
        if (best < 0.0 || d < best) {
            best = d;
            order = n;
        }
    }
    return best;
}

double nearest_hyper(double freq, double omegaL, double omega0R, int& order) {
    const int cands[2] = {static_cast<int>(std::lround((freq - omega0R) / (2.0 * omegaL))),
                          static_cast<int>(std::lround((-freq - omega0R) / (2.0 * omegaL)))};
    double best = -1.0;
    for (int c : cands) {
        for (int n = c - 1; n <= c + 1; ++n) {
            const double d = std::abs(std::abs(omega0R + 2.0 * n * omegaL) - freq);
            if (best < 0.0 || d < best) {
                best = d;
                order = n;
            }
        }
    }
    return best;
}

}  // namespace

PeakList classify_lines(const PeakList& peaks, double omegaL, double omega0R, double bin) {
    if (!(omegaL > 0.0)) throw ValidationError("classify_lines: omegaL must be positive");
    PeakList out = peaks;
    for (Peak& peak : out) {
        int n_odd = 0;
        int n_hyper = 0;
        const double d_odd = nearest_odd(peak.freq, omegaL, n_odd);
        const double d_hyper = nearest_hyper(peak.freq, omegaL, omega0R, n_hyper);
        if (d_odd <= bin && d_odd <= d_hyper) {
            peak.kind = PeakKind::odd_harmonic;
            peak.order = n_odd;
        } else if (d_hyper <= bin) {
            peak.kind = PeakKind::hyper_raman;
            peak.order = n_hyper;
        } else {
            peak.kind = PeakKind::unclassified;
            peak.order = 0;
        }
    }
    return out;
}

const char* peak_kind_name(PeakKind kind) {
    switch (kind) {
        case PeakKind::odd_harmonic: return "odd";
        case PeakKind::hyper_raman: return "hyper-raman";
        default: return "unclassified";
    }
}

}  // namespace qdual
