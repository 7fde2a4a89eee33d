#include "qdual/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "qdual/errors.hpp"

namespace qdual {

using json = nlohmann::json;

const char* experiment_name(Experiment e) {
    switch (e) {
        case Experiment::jc_compare: return "jc-compare";
        case Experiment::hhg_spectrum: return "hhg-spectrum";
        case Experiment::wkbj_demo: return "wkbj-demo";
        default: return "sweep";
    }
}

namespace {

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw UnknownKey("unknown key '" + (path.empty() ? item.key() : path + "." + item.key()) +
                             "'");
}

const json* find(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& path, const std::string& key,
                  bool required, double fallback) {
    const json* v = find(obj, key);
    if (!v) {
        if (required) throw ValidationError("missing required field '" + path + key + "'");
        return fallback;
    }
    if (!v->is_number()) throw ValidationError("field '" + path + key + "' must be a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw ValidationError("field '" + path + key + "' must be finite");
    return x;
}

long long get_integer(const json& obj, const std::string& path, const std::string& key,
                      bool required, long long fallback) {
    const json* v = find(obj, key);
    if (!v) {
        if (required) throw ValidationError("missing required field '" + path + key + "'");
        return fallback;
    }
    if (!v->is_number_integer())
        throw ValidationError("field '" + path + key + "' must be an integer");
    return v->get<long long>();
}

cplx get_complex(const json& obj, const std::string& path, const std::string& key, cplx fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
        throw ValidationError("field '" + path + key + "' must be a [re, im] pair");
    const cplx z((*v)[0].get<double>(), (*v)[1].get<double>());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw ValidationError("field '" + path + key + "' must be finite");
    return z;
}

bool power_of_two(long long n) { return n >= 1 && (n & (n - 1)) == 0; }

void parse_jc(const json& doc, RunConfig& cfg) {
    const json* section = find(doc, "jc");
    if (!section) throw ValidationError("missing required section 'jc'");
    if (!section->is_object()) throw ValidationError("section 'jc' must be an object");
    check_keys(*section, "jc", {"omega", "omega0", "g", "n"});
    cfg.jc.omega = get_number(*section, "jc.", "omega", true, 0.0);
    cfg.jc.omega0 = get_number(*section, "jc.", "omega0", true, 0.0);
    cfg.jc.g = get_number(*section, "jc.", "g", true, 0.0);
    const long long n = get_integer(*section, "jc.", "n", true, 0);
    if (n < 0) throw ValidationError("field 'jc.n' must be >= 0");
    cfg.jc.n = static_cast<int>(n);
}

void parse_hhg(const json& doc, RunConfig& cfg, bool dipole_nonzero) {
    const json* section = find(doc, "hhg");
    if (!section) throw ValidationError("missing required section 'hhg'");
    if (!section->is_object()) throw ValidationError("section 'hhg' must be an object");
    check_keys(*section, "hhg", {"omega0", "omegaL", "field", "dipole"});
    cfg.hhg.omega0 = get_number(*section, "hhg.", "omega0", true, 0.0);
    cfg.hhg.omegaL = get_number(*section, "hhg.", "omegaL", true, 0.0);
    cfg.hhg.field = get_number(*section, "hhg.", "field", true, 0.0);
    cfg.hhg.dipole = get_number(*section, "hhg.", "dipole", true, 0.0);
    if (!(cfg.hhg.omegaL > 0.0)) throw ValidationError("field 'hhg.omegaL' must be positive");
    if (dipole_nonzero && cfg.hhg.dipole == 0.0)
        throw ValidationError("field 'hhg.dipole' must be nonzero for a z sweep");
}

void parse_wkbj(const json& doc, RunConfig& cfg) {
    const json* section = find(doc, "wkbj");
    if (!section) throw ValidationError("missing required section 'wkbj'");
    if (!section->is_object()) throw ValidationError("section 'wkbj' must be an object");
    check_keys(*section, "wkbj", {"eps", "x0", "x1", "psi0", "phi0", "samples"});
    cfg.wkbj.eps = get_number(*section, "wkbj.", "eps", true, 0.0);
    cfg.wkbj.x0 = get_number(*section, "wkbj.", "x0", false, 0.0);
    cfg.wkbj.x1 = get_number(*section, "wkbj.", "x1", false, 10.0);
    cfg.wkbj.psi0 = get_complex(*section, "wkbj.", "psi0", cplx(1.0, 0.0));
    cfg.wkbj.phi0 = get_complex(*section, "wkbj.", "phi0", cplx(0.0, 0.0));
    const long long samples = get_integer(*section, "wkbj.", "samples", false, 2049);
    if (samples < 3) throw ValidationError("field 'wkbj.samples' must be >= 3");
    cfg.wkbj.samples = static_cast<std::size_t>(samples);
    if (!(cfg.wkbj.eps >= 0.0)) throw ValidationError("field 'wkbj.eps' must be >= 0");
    if (!(cfg.wkbj.x1 > cfg.wkbj.x0)) throw ValidationError("field 'wkbj.x1' must exceed wkbj.x0");
    // 1 + eps x must stay positive (no turning points)
    if (1.0 + cfg.wkbj.eps * cfg.wkbj.x0 <= 0.0 || 1.0 + cfg.wkbj.eps * cfg.wkbj.x1 <= 0.0)
        throw ValidationError("wkbj: alpha^2 = 1 + eps x must stay positive on [x0, x1]");
}

void parse_grid(const json& doc, RunConfig& cfg) {
    double t0 = 0.0;
    double t1 = 0.0;
    long long samples = 4096;
    bool have_t1 = false;
    if (const json* section = find(doc, "grid")) {
        if (!section->is_object()) throw ValidationError("section 'grid' must be an object");
        check_keys(*section, "grid", {"t0", "t1", "samples"});
        t0 = get_number(*section, "grid.", "t0", false, 0.0);
        if (find(*section, "t1")) {
            t1 = get_number(*section, "grid.", "t1", true, 0.0);
            have_t1 = true;
        }
        samples = get_integer(*section, "grid.", "samples", false, 4096);
    }
    if (!have_t1) {
        if (cfg.jc.delta() == 0.0)
            throw ValidationError("field 'grid.t1' has no default when the detuning vanishes");
        t1 = t0 + 200.0 / std::abs(cfg.jc.delta());
    }
    if (samples < 2) throw ValidationError("field 'grid.samples' must be >= 2");
    if (!(t1 > t0)) throw ValidationError("field 'grid.t1' must exceed grid.t0");
    cfg.grid = TimeGrid(t0, t1, static_cast<std::size_t>(samples));
}

void parse_init(const json& doc, RunConfig& cfg, cplx c1_default, cplx c2_default) {
    cfg.init.c1 = c1_default;
    cfg.init.c2 = c2_default;
    if (const json* section = find(doc, "init")) {
        if (!section->is_object()) throw ValidationError("section 'init' must be an object");
        check_keys(*section, "init", {"c1", "c2"});
        cfg.init.c1 = get_complex(*section, "init.", "c1", cplx(0.0, 0.0));
        cfg.init.c2 = get_complex(*section, "init.", "c2", cplx(0.0, 0.0));
    }
    const double norm = std::sqrt(std::norm(cfg.init.c1) + std::norm(cfg.init.c2));
    if (!(norm > 0.0)) throw ValidationError("section 'init' must have nonzero norm");
    cfg.init.c1 /= norm;
    cfg.init.c2 /= norm;
}

void parse_spectrum(const json& doc, RunConfig& cfg) {
    if (const json* section = find(doc, "spectrum")) {
        if (!section->is_object()) throw ValidationError("section 'spectrum' must be an object");
        check_keys(*section, "spectrum", {"periods", "samples_per_period", "rel_threshold"});
        const long long periods = get_integer(*section, "spectrum.", "periods", false, 256);
        const long long spp = get_integer(*section, "spectrum.", "samples_per_period", false, 64);
        if (!power_of_two(periods))
            throw ValidationError("field 'spectrum.periods' must be a power of two");
        if (!power_of_two(spp) || spp < 2)
            throw ValidationError("field 'spectrum.samples_per_period' must be a power of two >= 2");
        cfg.spectrum.periods = static_cast<std::size_t>(periods);
        cfg.spectrum.samples_per_period = static_cast<std::size_t>(spp);
        cfg.spectrum.rel_threshold =
            get_number(*section, "spectrum.", "rel_threshold", false, 1e-4);
        if (!(cfg.spectrum.rel_threshold > 0.0) || cfg.spectrum.rel_threshold > 1.0)
            throw ValidationError("field 'spectrum.rel_threshold' must be in (0, 1]");
    }
}

void parse_sweep(const json& doc, RunConfig& cfg) {
    const json* section = find(doc, "sweep");
    if (!section) throw ValidationError("missing required section 'sweep'");
    if (!section->is_object()) throw ValidationError("section 'sweep' must be an object");
    check_keys(*section, "sweep", {"parameter", "values"});
    if (const json* par = find(*section, "parameter")) {
        if (!par->is_string() || par->get<std::string>() != "z")
            throw ValidationError("field 'sweep.parameter' supports only \"z\"");
    }
    const json* values = find(*section, "values");
    if (!values || !values->is_array() || values->empty())
        throw ValidationError("field 'sweep.values' must be a non-empty array");
    cfg.sweep.values.clear();
    for (const json& v : *values) {
        if (!v.is_number() || !(v.get<double>() > 0.0) || !std::isfinite(v.get<double>()))
            throw ValidationError("field 'sweep.values' entries must be positive numbers");
        cfg.sweep.values.push_back(v.get<double>());
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config root must be a JSON object");

    const json* exp = find(doc, "experiment");
    if (!exp || !exp->is_string())
        throw ValidationError("missing required field 'experiment' (string)");
    const std::string name = exp->get<std::string>();

    RunConfig cfg;
    std::set<std::string> allowed{"experiment", "out"};
    if (name == "jc-compare") {
        cfg.experiment = Experiment::jc_compare;
        allowed.insert({"jc", "grid", "init"});
    } else if (name == "hhg-spectrum") {
        cfg.experiment = Experiment::hhg_spectrum;
        allowed.insert({"hhg", "init", "spectrum"});
    } else if (name == "wkbj-demo") {
        cfg.experiment = Experiment::wkbj_demo;
        allowed.insert({"wkbj"});
    } else if (name == "sweep") {
        cfg.experiment = Experiment::sweep;
        allowed.insert({"hhg", "init", "spectrum", "sweep"});
    } else {
        throw ValidationError("field 'experiment' must be one of jc-compare, hhg-spectrum, "
                              "wkbj-demo, sweep");
    }
    for (const auto& item : doc.items()) {
        if (allowed.count(item.key())) continue;
        static const std::set<std::string> sections{"jc", "hhg", "wkbj", "grid", "init",
                                                    "spectrum", "sweep"};
        if (sections.count(item.key()))
            throw ValidationError("section '" + item.key() + "' is not used by experiment '" +
                                  name + "'");
        throw UnknownKey("unknown key '" + item.key() + "'");
    }

    if (const json* out = find(doc, "out")) {
        if (!out->is_string() || out->get<std::string>().empty())
            throw ValidationError("field 'out' must be a non-empty string");
        cfg.out = out->get<std::string>();
    }

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (cfg.experiment) {
        case Experiment::jc_compare:
            parse_jc(doc, cfg);
            parse_grid(doc, cfg);
            parse_init(doc, cfg, cplx(1.0, 0.0), cplx(0.0, 0.0));
            break;
        case Experiment::hhg_spectrum:
            parse_hhg(doc, cfg, false);
            parse_init(doc, cfg, cplx(inv_sqrt2, 0.0), cplx(inv_sqrt2, 0.0));
            parse_spectrum(doc, cfg);
            break;
        case Experiment::wkbj_demo:
            parse_wkbj(doc, cfg);
            break;
        case Experiment::sweep:
            parse_hhg(doc, cfg, true);
            parse_init(doc, cfg, cplx(inv_sqrt2, 0.0), cplx(inv_sqrt2, 0.0));
            parse_spectrum(doc, cfg);
            parse_sweep(doc, cfg);
            break;
    }
    return cfg;
}

}  // namespace qdual
