#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qdual/grid.hpp"
#include "qdual/hhg.hpp"
#include "qdual/jc.hpp"

namespace qdual {

enum class Experiment { jc_compare, hhg_spectrum, wkbj_demo, sweep };

const char* experiment_name(Experiment e);

// alpha(x) = sqrt(1 + eps x) demonstration problem
struct WkbjConfig {
    double eps = 0.01;
    double x0 = 0.0;
    double x1 = 10.0;
    cplx psi0{1.0, 0.0};
    cplx phi0{0.0, 0.0};
    std::size_t samples = 2049;
};

struct SpectrumConfig {
    std::size_t periods = 256;            // laser periods captured (power of two)
    std::size_t samples_per_period = 64;  // power of two
    double rel_threshold = 1e-4;
};

struct SweepConfig {
    std::string parameter = "z";
    std::vector<double> values;
};

struct RunConfig {
    Experiment experiment = Experiment::jc_compare;
    JcParams jc;
    HhgParams hhg;
    WkbjConfig wkbj;
    TimeGrid grid;  // jc-compare time window
    Populations init;
    SpectrumConfig spectrum;
    SweepConfig sweep;
    std::string out = "./out";
};

// Strict JSON: unknown keys anywhere are rejected, sections irrelevant to the
// chosen experiment are rejected, model parameters are mandatory, numeric
// defaults fill the rest. Complex numbers are [re, im] pairs. The initial
// state is normalized to unit norm.
RunConfig parse_config(const std::string& text);

}  // namespace qdual
