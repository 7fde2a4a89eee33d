#include "qdual/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdual/errors.hpp"
#include "qdual/hhg.hpp"
#include "qdual/jc.hpp"
#include "qdual/spectrum.hpp"
#include "qdual/wkbj.hpp"

namespace qdual {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

ojson complex_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

ojson echo_config(const RunConfig& cfg) {
    ojson j;
    j["experiment"] = experiment_name(cfg.experiment);
    switch (cfg.experiment) {
        case Experiment::jc_compare:
            j["jc"] = {{"omega", cfg.jc.omega},
                       {"omega0", cfg.jc.omega0},
                       {"g", cfg.jc.g},
                       {"n", cfg.jc.n}};
            j["grid"] = {{"t0", cfg.grid.t0}, {"t1", cfg.grid.t1}, {"samples", cfg.grid.samples}};
            j["init"] = {{"c1", complex_json(cfg.init.c1)}, {"c2", complex_json(cfg.init.c2)}};
            break;
        case Experiment::wkbj_demo:
            j["wkbj"] = {{"eps", cfg.wkbj.eps},
                         {"x0", cfg.wkbj.x0},
                         {"x1", cfg.wkbj.x1},
                         {"psi0", complex_json(cfg.wkbj.psi0)},
                         {"phi0", complex_json(cfg.wkbj.phi0)},
                         {"samples", cfg.wkbj.samples}};
            break;
        case Experiment::hhg_spectrum:
        case Experiment::sweep:
            j["hhg"] = {{"omega0", cfg.hhg.omega0},
                        {"omegaL", cfg.hhg.omegaL},
                        {"field", cfg.hhg.field},
                        {"dipole", cfg.hhg.dipole}};
            j["init"] = {{"c1", complex_json(cfg.init.c1)}, {"c2", complex_json(cfg.init.c2)}};
            j["spectrum"] = {{"periods", cfg.spectrum.periods},
                             {"samples_per_period", cfg.spectrum.samples_per_period},
                             {"rel_threshold", cfg.spectrum.rel_threshold}};
            if (cfg.experiment == Experiment::sweep)
                j["sweep"] = {{"parameter", cfg.sweep.parameter}, {"values", cfg.sweep.values}};
            break;
    }
    j["out"] = cfg.out;
    return j;
}

std::string peak_rows(const PeakList& peaks, const std::string& lead) {
    PeakList sorted = peaks;
    std::sort(sorted.begin(), sorted.end(),
              [](const Peak& a, const Peak& b) { return a.freq < b.freq; });
    std::string rows;
    for (const Peak& p : sorted) {
        rows += lead + fmt(p.freq) + ',' + fmt(p.height) + ',' + peak_kind_name(p.kind) + ',' +
                std::to_string(p.order) + '\n';
    }
    return rows;
}

void write_json(const fs::path& dir, const std::string& name, ojson doc) {
    write_file(dir / (name + ".json"), doc.dump(2) + "\n");
}

// --- jc-compare -------------------------------------------------------------

void run_jc_compare(const RunConfig& cfg, const fs::path& dir) {
    const JcAmplitudes init{cfg.init.c1, cfg.init.c2};
    std::string csv = "t,err_order0,err_order1,err_order2,err_order2_resummed\n";
    double worst[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t j = 0; j < cfg.grid.samples; ++j) {
        const double t = cfg.grid.node(j);
        const JcAmplitudes exact = jc_exact(cfg.jc, init, t);
        double err[4];
        for (int k = 0; k < 4; ++k) {
            const JcAmplitudes approx =
                jc_dyson_closed(cfg.jc, init, t, std::min(k, 2), k == 3);
            err[k] = std::sqrt(std::norm(approx.c1 - exact.c1) + std::norm(approx.c2 - exact.c2));
            worst[k] = std::max(worst[k], err[k]);
        }
        csv += fmt(t);
        for (double e : err) csv += std::string(",") + fmt(e);
        csv += '\n';
    }
    write_file(dir / "jc-compare.csv", csv);
    write_file(dir / "jc-compare-peaks.csv", "freq,height,kind,order\n");

    ojson doc = echo_config(cfg);
    doc["summary"] = {{"delta", cfg.jc.delta()},
                      {"rabi", cfg.jc.rabi()},
                      {"big_omega", cfg.jc.big_omega()},
                      {"lambda", cfg.jc.lambda()},
                      {"max_err_order0", worst[0]},
                      {"max_err_order1", worst[1]},
                      {"max_err_order2", worst[2]},
                      {"max_err_order2_resummed", worst[3]}};
    write_json(dir, "jc-compare", doc);

    write_file(dir / "plot.gp",
               "set datafile separator ','\n"
               "set key autotitle columnhead\n"
               "set logscale y\n"
               "set xlabel 't'\n"
               "set ylabel 'amplitude error'\n"
               "plot 'jc-compare.csv' using 1:2 with lines, \\\n"
               "     '' using 1:3 with lines, \\\n"
               "     '' using 1:4 with lines, \\\n"
               "     '' using 1:5 with lines\n");
}

// --- hhg-spectrum and sweep -------------------------------------------------

TimeGrid spectrum_grid(const HhgParams& p, const SpectrumConfig& sc) {
    const std::size_t n = sc.periods * sc.samples_per_period;
    const double dt = (2.0 * std::numbers::pi / p.omegaL) / static_cast<double>(sc.samples_per_period);
    return TimeGrid(0.0, dt * static_cast<double>(n - 1), n);
}

void run_hhg_spectrum(const RunConfig& cfg, const fs::path& dir) {
    const TimeGrid grid = spectrum_grid(cfg.hhg, cfg.spectrum);
    const DipoleSignal sig = dipole_components(cfg.hhg, cfg.init, grid);

    std::string csv = "t,x\n";
    for (std::size_t j = 0; j < grid.samples; ++j)
        csv += fmt(grid.node(j)) + std::string(",") + fmt(sig.total[j]) + '\n';
    write_file(dir / "hhg-spectrum.csv", csv);

    const SpectrumResult spec = power_spectrum({grid.spacing(), sig.total});
    std::string scsv = "freq,power\n";
    for (std::size_t k = 0; k < spec.freqs.size(); ++k)
        scsv += fmt(spec.freqs[k]) + std::string(",") + fmt(spec.power[k]) + '\n';
    write_file(dir / "hhg-spectrum-spectrum.csv", scsv);

    const double w0r = renormalized_gap(cfg.hhg);
    const PeakList peaks = classify_lines(detect_peaks(spec, cfg.spectrum.rel_threshold),
                                          cfg.hhg.omegaL, w0r, spec.bin_width);
    write_file(dir / "hhg-spectrum-peaks.csv", "freq,height,kind,order\n" + peak_rows(peaks, ""));

    std::size_t odd = 0, hyper = 0, other = 0;
    for (const Peak& p : peaks) {
        if (p.kind == PeakKind::odd_harmonic) ++odd;
        else if (p.kind == PeakKind::hyper_raman) ++hyper;
        else ++other;
    }
    ojson doc = echo_config(cfg);
    doc["summary"] = {{"z", cfg.hhg.z()},
                      {"omega0R", w0r},
                      {"bin_width", spec.bin_width},
                      {"peaks_odd", odd},
                      {"peaks_hyper_raman", hyper},
                      {"peaks_unclassified", other}};
    write_json(dir, "hhg-spectrum", doc);

    write_file(dir / "plot.gp",
               "set datafile separator ','\n"
               "set key autotitle columnhead\n"
               "set logscale y\n"
               "set xlabel 'angular frequency'\n"
               "set ylabel 'power'\n"
               "plot 'hhg-spectrum-spectrum.csv' using 1:2 with lines\n");
}

struct SweepPoint {
    double z = 0.0;
    double omega0R = 0.0;
    double bin = 0.0;
    PeakList peaks;
};

SweepPoint sweep_point(const RunConfig& cfg, double z) {
    HhgParams p = cfg.hhg;
    p.field = z * p.omegaL / (2.0 * p.dipole);
    const TimeGrid grid = spectrum_grid(p, cfg.spectrum);
    const DipoleSignal sig = dipole_components(p, cfg.init, grid);
    // hyper-Raman centers ride on the strong omega0R carrier; subtract the
    // carrier from the model itself so the sidebands stand alone
    std::vector<double> series(grid.samples);
    for (std::size_t j = 0; j < grid.samples; ++j) series[j] = sig.odd[j] + sig.hyper[j];

    SweepPoint out;
    out.z = z;
    out.omega0R = renormalized_gap(p);
    const SpectrumResult spec = power_spectrum({grid.spacing(), series});
    out.bin = spec.bin_width;
    out.peaks = classify_lines(detect_peaks(spec, cfg.spectrum.rel_threshold), p.omegaL,
                               out.omega0R, spec.bin_width);
    return out;
}

void run_sweep(const RunConfig& cfg, const fs::path& dir) {
    std::vector<std::future<SweepPoint>> jobs;
    jobs.reserve(cfg.sweep.values.size());
    for (double z : cfg.sweep.values)
        jobs.push_back(std::async(std::launch::async, sweep_point, std::cref(cfg), z));
    std::vector<SweepPoint> points;
    points.reserve(jobs.size());
    for (auto& job : jobs) points.push_back(job.get());

    std::string csv = "z,omega0R,order,predicted_freq,measured_freq,bin_width\n";
    std::string pcsv = "z,freq,height,kind,order\n";
    ojson per_z = ojson::array();
    for (const SweepPoint& pt : points) {
        PeakList sorted = pt.peaks;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Peak& a, const Peak& b) { return a.freq < b.freq; });
        std::size_t lines = 0;
        for (const Peak& peak : sorted) {
            if (peak.kind != PeakKind::hyper_raman) continue;
            const double predicted =
                std::abs(pt.omega0R + 2.0 * peak.order * cfg.hhg.omegaL);
            csv += fmt(pt.z) + std::string(",") + fmt(pt.omega0R) + ',' +
                   std::to_string(peak.order) + ',' + fmt(predicted) + ',' + fmt(peak.freq) +
                   ',' + fmt(pt.bin) + '\n';
            ++lines;
        }
        pcsv += peak_rows(pt.peaks, fmt(pt.z) + std::string(","));
        per_z.push_back({{"z", pt.z},
                         {"omega0R", pt.omega0R},
                         {"bin_width", pt.bin},
                         {"hyper_raman_lines", lines},
                         {"peaks", pt.peaks.size()}});
    }
    write_file(dir / "sweep.csv", csv);
    write_file(dir / "sweep-peaks.csv", pcsv);

    ojson doc = echo_config(cfg);
    doc["summary"] = {{"points", per_z}};
    write_json(dir, "sweep", doc);

    write_file(dir / "plot.gp",
               "set datafile separator ','\n"
               "set key autotitle columnhead\n"
               "set xlabel 'predicted line center'\n"
               "set ylabel 'measured line center'\n"
               "plot 'sweep.csv' using 4:5 with points, x with lines title 'x=y'\n");
}

// --- wkbj-demo ---------------------------------------------------------------

void run_wkbj_demo(const RunConfig& cfg, const fs::path& dir) {
    const double eps = cfg.wkbj.eps;
    const WkbjProblem problem{[eps](double x) { return std::sqrt(1.0 + eps * x); },
                              cfg.wkbj.x0, cfg.wkbj.x1, cfg.wkbj.psi0, cfg.wkbj.phi0};
    std::vector<double> xs(cfg.wkbj.samples);
    const double h = (cfg.wkbj.x1 - cfg.wkbj.x0) / static_cast<double>(cfg.wkbj.samples - 1);
    for (std::size_t j = 0; j < xs.size(); ++j) xs[j] = cfg.wkbj.x0 + h * static_cast<double>(j);
    const auto ref = reference_solve_samples(problem, xs, 1e-10);

    std::string csv = "x,wkbj_re,wkbj_im,ref_re,ref_im,err\n";
    double max_err = 0.0;
    double max_ref = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        const cplx w = wkbj_closed(problem, xs[j]);
        const cplx r = ref[j].first;
        const double err = std::abs(w - r);
        max_err = std::max(max_err, err);
        max_ref = std::max(max_ref, std::abs(r));
        csv += fmt(xs[j]) + std::string(",") + fmt(w.real()) + ',' + fmt(w.imag()) + ',' +
               fmt(r.real()) + ',' + fmt(r.imag()) + ',' + fmt(err) + '\n';
    }
    write_file(dir / "wkbj-demo.csv", csv);
    write_file(dir / "wkbj-demo-peaks.csv", "freq,height,kind,order\n");

    ojson doc = echo_config(cfg);
    doc["summary"] = {{"max_err", max_err},
                      {"max_ref", max_ref},
                      {"rel_err", max_ref > 0.0 ? max_err / max_ref : 0.0}};
    write_json(dir, "wkbj-demo", doc);

    write_file(dir / "plot.gp",
               "set datafile separator ','\n"
               "set key autotitle columnhead\n"
               "set xlabel 'x'\n"
               "set ylabel 'psi'\n"
               "plot 'wkbj-demo.csv' using 1:2 with lines, '' using 1:4 with lines\n");
}

}  // namespace

void run(const RunConfig& config) {
    fs::path dir(config.out);
    try {
        fs::create_directories(dir);
    } catch (const fs::filesystem_error& e) {
        throw IoError("cannot create output directory '" + config.out + "': " + e.what());
    }
    switch (config.experiment) {
        case Experiment::jc_compare: run_jc_compare(config, dir); break;
        case Experiment::hhg_spectrum: run_hhg_spectrum(config, dir); break;
        case Experiment::wkbj_demo: run_wkbj_demo(config, dir); break;
        case Experiment::sweep: run_sweep(config, dir); break;
    }
}

}  // namespace qdual
