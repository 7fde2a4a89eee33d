#pragma once

#include <cstddef>
#include <vector>

namespace qdual {

// Uniformly sampled real signal.
struct TimeSeries {
    double dt = 1.0;
    std::vector<double> values;
};

// One-sided power spectrum on angular-frequency bins.
struct SpectrumResult {
    std::vector<double> freqs;  // ascending, freqs[k] = 2 pi k / (N dt)
    std::vector<double> power;  // non-negative; an exact-bin cosine of amplitude A gives A^2/2
    double bin_width = 0.0;
};

enum class PeakKind { odd_harmonic, hyper_raman, unclassified };

// order: odd_harmonic n means the line (2n+1) omegaL;
// hyper_raman n (signed) means the line |omega0R + 2n omegaL| (n = 0 is the
// omega0R line itself). height is the power at the peak's bin; freq carries
// the sub-bin refined center.
struct Peak {
    double freq = 0.0;
    double height = 0.0;
    PeakKind kind = PeakKind::unclassified;
    int order = 0;
};

using PeakList = std::vector<Peak>;

// Power-of-two length, rectangular window. Sum of power = mean square of the signal.
SpectrumResult power_spectrum(const TimeSeries& series);

// Strict local maxima of the interior bins rising above rel_threshold times
// the largest interior bin, with parabolic sub-bin refinement on the
// reciprocal magnitude. 0 < rel_threshold <= 1.
PeakList detect_peaks(const SpectrumResult& spec, double rel_threshold);

// Tag each peak with the nearest line of the odd-harmonic comb {(2n+1) omegaL}
// or the hyper-Raman family {|omega0R + 2n omegaL|} when it lies within one
// bin; ties prefer the odd harmonic. Unmatched peaks stay unclassified.
PeakList classify_lines(const PeakList& peaks, double omegaL, double omega0R, double bin);

const char* peak_kind_name(PeakKind kind);

}  // namespace qdual
