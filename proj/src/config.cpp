#include "isscert/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <string>

namespace isscert {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& ptr, const std::string& msg) {
    throw ConfigError("config error at " + ptr + ": " + msg);
}

const json& get_field(const json& obj, const char* key, const std::string& ptr) {
    if (!obj.is_object()) fail(ptr, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(ptr + "/" + key, "missing required field");
    return *it;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& ptr) {
    if (!obj.is_object()) fail(ptr, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) known = known || it.key() == key;
        if (!known) fail(ptr + "/" + it.key(), "unknown field");
    }
}

double get_number(const json& obj, const char* key, const std::string& ptr) {
    const json& v = get_field(obj, key, ptr);
    if (!v.is_number()) fail(ptr + "/" + key, "expected a number");
    return v.get<double>();
}

double get_number_or(const json& obj, const char* key, const std::string& ptr,
                     double fallback) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return get_number(obj, key, ptr);
}

int get_int(const json& obj, const char* key, const std::string& ptr) {
    const json& v = get_field(obj, key, ptr);
    if (!v.is_number_integer()) fail(ptr + "/" + key, "expected an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const char* key, const std::string& ptr) {
    const json& v = get_field(obj, key, ptr);
    if (!v.is_string()) fail(ptr + "/" + key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_number_array(const json& obj, const char* key,
                                     const std::string& ptr) {
    const json& v = get_field(obj, key, ptr);
    if (!v.is_array()) fail(ptr + "/" + key, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            fail(ptr + "/" + key + "/" + std::to_string(i), "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

SignalTerm parse_signal_term(const json& v, const std::string& ptr) {
    const std::string kind = get_string(v, "kind", ptr);
    SignalTerm term;
    if (kind == "constant") {
        check_keys(v, {"kind", "amplitude"}, ptr);
        term.kind = SignalTerm::Kind::constant;
        term.amplitude = get_number(v, "amplitude", ptr);
    } else if (kind == "sinusoid") {
        check_keys(v, {"kind", "amplitude", "omega", "phase"}, ptr);
        term.kind = SignalTerm::Kind::sinusoid;
        term.amplitude = get_number(v, "amplitude", ptr);
        term.omega = get_number(v, "omega", ptr);
        term.phase = get_number_or(v, "phase", ptr, 0.0);
    } else if (kind == "decaying_exp") {
        check_keys(v, {"kind", "amplitude", "rate"}, ptr);
        term.kind = SignalTerm::Kind::decaying_exp;
        term.amplitude = get_number(v, "amplitude", ptr);
        term.rate = get_number(v, "rate", ptr);
    } else {
        fail(ptr + "/kind", "unknown signal term kind '" + kind + "'");
    }
    return term;
}

Signal parse_signal(const json& v, const std::string& ptr) {
    check_keys(v, {"terms"}, ptr);
    Signal signal;
    const json& terms = get_field(v, "terms", ptr);
    if (!terms.is_array()) fail(ptr + "/terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i)
        signal.add_term(parse_signal_term(terms[i], ptr + "/terms/" + std::to_string(i)));
    return signal;
}

SpaceFactor parse_space_factor(const json& v, const std::string& ptr) {
    const std::string kind = get_string(v, "kind", ptr);
    SpaceFactor sf;
    if (kind == "polynomial") {
        check_keys(v, {"kind", "coeffs"}, ptr);
        sf.kind = SpaceFactor::Kind::polynomial;
        sf.coeffs = get_number_array(v, "coeffs", ptr);
    } else if (kind == "sine_mode") {
        check_keys(v, {"kind", "amplitude", "mode"}, ptr);
        sf.kind = SpaceFactor::Kind::sine_mode;
        sf.amplitude = get_number(v, "amplitude", ptr);
        sf.mode = get_int(v, "mode", ptr);
        if (sf.mode < 1) fail(ptr + "/mode", "must be >= 1");
    } else {
        fail(ptr + "/kind", "unknown space factor kind '" + kind + "'");
    }
    return sf;
}

Field parse_field(const json& v, const std::string& ptr) {
    check_keys(v, {"exp_weight", "terms"}, ptr);
    Field field;
    field.set_exp_weight(get_number_or(v, "exp_weight", ptr, 0.0));
    const json& terms = get_field(v, "terms", ptr);
    if (!terms.is_array()) fail(ptr + "/terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tptr = ptr + "/terms/" + std::to_string(i);
        check_keys(terms[i], {"space", "time"}, tptr);
        FieldTerm ft;
        ft.space = parse_space_factor(get_field(terms[i], "space", tptr), tptr + "/space");
        ft.time = parse_signal_term(get_field(terms[i], "time", tptr), tptr + "/time");
        field.add_term(ft);
    }
    return field;
}

InitialProfile parse_profile(const json& v, const std::string& ptr) {
    check_keys(v, {"exp_weight", "terms"}, ptr);
    InitialProfile phi;
    phi.set_exp_weight(get_number_or(v, "exp_weight", ptr, 0.0));
    const json& terms = get_field(v, "terms", ptr);
    if (!terms.is_array()) fail(ptr + "/terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tptr = ptr + "/terms/" + std::to_string(i);
        const std::string kind = get_string(terms[i], "kind", tptr);
        ProfileTerm term;
        if (kind == "polynomial") {
            check_keys(terms[i], {"kind", "coeffs"}, tptr);
            term.kind = ProfileTerm::Kind::polynomial;
            term.coeffs = get_number_array(terms[i], "coeffs", tptr);
        } else if (kind == "sine_mode") {
            check_keys(terms[i], {"kind", "amplitude", "mode"}, tptr);
            term.kind = ProfileTerm::Kind::sine_mode;
            term.amplitude = get_number(terms[i], "amplitude", tptr);
            term.mode = get_int(terms[i], "mode", tptr);
            if (term.mode < 1) fail(tptr + "/mode", "must be >= 1");
        } else {
            fail(tptr + "/kind", "unknown profile term kind '" + kind + "'");
        }
        phi.add_term(std::move(term));
    }
    return phi;
}

Nonlinearity parse_nonlinearity(const json& v, const std::string& ptr) {
    const std::string kind = get_string(v, "kind", ptr);
    if (kind == "zero") {
        check_keys(v, {"kind"}, ptr);
        return Nonlinearity::zero();
    }
    if (kind == "polynomial_odd") {
        check_keys(v, {"kind", "coeffs"}, ptr);
        return Nonlinearity::polynomial_odd(get_number_array(v, "coeffs", ptr));
    }
    if (kind == "cubic_quintic") {
        check_keys(v, {"kind", "c2", "c3"}, ptr);
        const double c2 = get_number(v, "c2", ptr);
        const double c3 = get_number(v, "c3", ptr);
        if (!(c2 > 0.0)) fail(ptr + "/c2", "must be > 0");
        if (!(c3 > 0.0)) fail(ptr + "/c3", "must be > 0");
        return Nonlinearity::cubic_quintic(c2, c3);
    }
    fail(ptr + "/kind", "unknown nonlinearity kind '" + kind + "'");
}

json signal_term_to_json(const SignalTerm& term) {
    json v;
    switch (term.kind) {
        case SignalTerm::Kind::constant:
            v["kind"] = "constant";
            v["amplitude"] = term.amplitude;
            break;
        case SignalTerm::Kind::sinusoid:
            v["kind"] = "sinusoid";
            v["amplitude"] = term.amplitude;
            v["omega"] = term.omega;
            v["phase"] = term.phase;
            break;
        case SignalTerm::Kind::decaying_exp:
            v["kind"] = "decaying_exp";
            v["amplitude"] = term.amplitude;
            v["rate"] = term.rate;
            break;
    }
    return v;
}

json signal_to_json(const Signal& signal) {
    json terms = json::array();
    for (const auto& term : signal.terms()) terms.push_back(signal_term_to_json(term));
    return json{{"terms", terms}};
}

json field_to_json(const Field& field) {
    json terms = json::array();
    for (const auto& term : field.terms()) {
        json space;
        if (term.space.kind == SpaceFactor::Kind::polynomial) {
            space["kind"] = "polynomial";
            space["coeffs"] = term.space.coeffs;
        } else {
            space["kind"] = "sine_mode";
            space["amplitude"] = term.space.amplitude;
            space["mode"] = term.space.mode;
        }
        terms.push_back(json{{"space", space}, {"time", signal_term_to_json(term.time)}});
    }
    json v{{"terms", terms}};
    if (field.exp_weight() != 0.0) v["exp_weight"] = field.exp_weight();
    return v;
}

json profile_to_json(const InitialProfile& phi) {
    json terms = json::array();
    for (const auto& term : phi.terms()) {
        json v;
        if (term.kind == ProfileTerm::Kind::polynomial) {
            v["kind"] = "polynomial";
            v["coeffs"] = term.coeffs;
        } else {
            v["kind"] = "sine_mode";
            v["amplitude"] = term.amplitude;
            v["mode"] = term.mode;
        }
        terms.push_back(v);
    }
    json v{{"terms", terms}};
    if (phi.exp_weight() != 0.0) v["exp_weight"] = phi.exp_weight();
    return v;
}

json nonlinearity_to_json(const Nonlinearity& h) {
    switch (h.kind()) {
        case NonlinearityKind::zero:
            return json{{"kind", "zero"}};
        case NonlinearityKind::polynomial_odd:
            return json{{"kind", "polynomial_odd"}, {"coeffs", h.coeffs()}};
        case NonlinearityKind::cubic_quintic:
            return json{{"kind", "cubic_quintic"}, {"c2", h.c2()}, {"c3", h.c3()}};
    }
    return json{{"kind", "zero"}};
}

json kfunction_to_json(const KFunction& k) {
    return json{{"p", k.p}, {"q", k.q}, {"r", k.r}};
}

}  // namespace

Config config_from_json(const json& doc) {
    check_keys(doc,
               {"coefficients", "boundary", "nonlinearity", "f", "d0", "d1", "phi",
                "overrides", "grid", "tolerances"},
               "");

    Config cfg;

    const json& coeff = get_field(doc, "coefficients", "");
    check_keys(coeff, {"a", "b", "c"}, "/coefficients");
    cfg.spec.a = get_number(coeff, "a", "/coefficients");
    cfg.spec.b = get_number(coeff, "b", "/coefficients");
    cfg.spec.c = get_number(coeff, "c", "/coefficients");
    if (!(cfg.spec.a > 0.0)) fail("/coefficients/a", "must be > 0");

    const json& bd = get_field(doc, "boundary", "");
    check_keys(bd, {"alpha0", "beta0", "alpha1", "beta1"}, "/boundary");
    cfg.spec.alpha0 = get_number(bd, "alpha0", "/boundary");
    cfg.spec.beta0 = get_number(bd, "beta0", "/boundary");
    cfg.spec.alpha1 = get_number(bd, "alpha1", "/boundary");
    cfg.spec.beta1 = get_number(bd, "beta1", "/boundary");
    for (const char* key : {"alpha0", "beta0", "alpha1", "beta1"})
        if (get_number(bd, key, "/boundary") < 0.0)
            fail(std::string("/boundary/") + key, "must be >= 0");
    if (!(cfg.spec.alpha0 + cfg.spec.beta0 > 0.0))
        fail("/boundary", "alpha0 + beta0 must be > 0");
    if (!(cfg.spec.alpha1 + cfg.spec.beta1 > 0.0))
        fail("/boundary", "alpha1 + beta1 must be > 0");

    if (doc.contains("nonlinearity"))
        cfg.spec.h = parse_nonlinearity(doc.at("nonlinearity"), "/nonlinearity");
    if (doc.contains("f")) cfg.spec.f = parse_field(doc.at("f"), "/f");
    if (doc.contains("d0")) cfg.spec.d0 = parse_signal(doc.at("d0"), "/d0");
    if (doc.contains("d1")) cfg.spec.d1 = parse_signal(doc.at("d1"), "/d1");
    if (doc.contains("phi")) cfg.spec.phi = parse_profile(doc.at("phi"), "/phi");

    if (doc.contains("overrides")) {
        const json& ov = doc.at("overrides");
        check_keys(ov, {"k0", "k1", "eps", "eps0", "eps1"}, "/overrides");
        if (ov.contains("k0")) cfg.overrides.k0 = get_number(ov, "k0", "/overrides");
        if (ov.contains("k1")) cfg.overrides.k1 = get_number(ov, "k1", "/overrides");
        if (ov.contains("eps")) cfg.overrides.eps = get_number(ov, "eps", "/overrides");
        if (ov.contains("eps0")) cfg.overrides.eps0 = get_number(ov, "eps0", "/overrides");
        if (ov.contains("eps1")) cfg.overrides.eps1 = get_number(ov, "eps1", "/overrides");
    }

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        check_keys(g, {"nx", "nt", "t_final"}, "/grid");
        if (g.contains("nx")) cfg.grid.nx = get_int(g, "nx", "/grid");
        if (g.contains("nt")) cfg.grid.nt = get_int(g, "nt", "/grid");
        if (g.contains("t_final")) cfg.grid.t_final = get_number(g, "t_final", "/grid");
        if (cfg.grid.nx < 3) fail("/grid/nx", "must be >= 3");
        if (cfg.grid.nt < 2) fail("/grid/nt", "must be >= 2");
        if (!(cfg.grid.t_final > 0.0)) fail("/grid/t_final", "must be > 0");
    }

    if (doc.contains("tolerances")) {
        const json& t = doc.at("tolerances");
        check_keys(t, {"tol_rel", "s_max", "n_samples", "t_samples", "t_max"},
                   "/tolerances");
        cfg.tolerances.tol_rel = get_number_or(t, "tol_rel", "/tolerances", 1e-2);
        cfg.tolerances.s_max = get_number_or(t, "s_max", "/tolerances", 10.0);
        if (t.contains("n_samples"))
            cfg.tolerances.n_samples = get_int(t, "n_samples", "/tolerances");
        if (t.contains("t_samples"))
            cfg.tolerances.t_samples = get_int(t, "t_samples", "/tolerances");
        cfg.tolerances.t_max = get_number_or(t, "t_max", "/tolerances", 1.0);
        if (!(cfg.tolerances.tol_rel > 0.0)) fail("/tolerances/tol_rel", "must be > 0");
        if (!(cfg.tolerances.s_max > 0.0)) fail("/tolerances/s_max", "must be > 0");
        if (cfg.tolerances.n_samples < 3) fail("/tolerances/n_samples", "must be >= 3");
        if (cfg.tolerances.t_samples < 2) fail("/tolerances/t_samples", "must be >= 2");
        if (!(cfg.tolerances.t_max > 0.0)) fail("/tolerances/t_max", "must be > 0");
    }

    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(doc);
}

json config_to_json(const Config& config) {
    json doc;
    doc["coefficients"] = {{"a", config.spec.a}, {"b", config.spec.b}, {"c", config.spec.c}};
    doc["boundary"] = {{"alpha0", config.spec.alpha0},
                       {"beta0", config.spec.beta0},
                       {"alpha1", config.spec.alpha1},
                       {"beta1", config.spec.beta1}};
    doc["nonlinearity"] = nonlinearity_to_json(config.spec.h);
    if (!config.spec.f.empty()) doc["f"] = field_to_json(config.spec.f);
    if (!config.spec.d0.empty()) doc["d0"] = signal_to_json(config.spec.d0);
    if (!config.spec.d1.empty()) doc["d1"] = signal_to_json(config.spec.d1);
    if (!config.spec.phi.empty()) doc["phi"] = profile_to_json(config.spec.phi);
    json ov;
    if (config.overrides.k0) ov["k0"] = *config.overrides.k0;
    if (config.overrides.k1) ov["k1"] = *config.overrides.k1;
    if (config.overrides.eps) ov["eps"] = *config.overrides.eps;
    if (config.overrides.eps0) ov["eps0"] = *config.overrides.eps0;
    if (config.overrides.eps1) ov["eps1"] = *config.overrides.eps1;
    if (!ov.empty()) doc["overrides"] = ov;
    doc["grid"] = {{"nx", config.grid.nx},
                   {"nt", config.grid.nt},
                   {"t_final", config.grid.t_final}};
    doc["tolerances"] = {{"tol_rel", config.tolerances.tol_rel},
                         {"s_max", config.tolerances.s_max},
                         {"n_samples", config.tolerances.n_samples},
                         {"t_samples", config.tolerances.t_samples},
                         {"t_max", config.tolerances.t_max}};
    return doc;
}

Config preset_reaction_diffusion(double a, double b, double c, double K1) {
    Config cfg;
    cfg.spec.a = a;
    cfg.spec.b = b;
    cfg.spec.c = c;
    cfg.spec.alpha0 = 1.0;
    cfg.spec.beta0 = 0.0;
    cfg.spec.alpha1 = K1;
    cfg.spec.beta1 = 1.0;
    cfg.spec.h = Nonlinearity::zero();
    // phi = x^2 (1-x)^2 has flat traces at both ends, so the compatibility
    // conditions hold with zero Dirichlet data and a zero-phase sinusoid.
    cfg.spec.d1 = Signal::sinusoid(0.1, 3.14159265358979323846);
    cfg.spec.phi = InitialProfile::polynomial({0.0, 0.0, 1.0, -2.0, 1.0});
    return cfg;
}

Config preset_ginzburg_landau(double a, double b, double c1, double c2, double c3) {
    Config cfg;
    cfg.spec.a = a;
    cfg.spec.b = b;
    cfg.spec.c = c1;
    cfg.spec.alpha0 = 1.0;
    cfg.spec.beta0 = 0.0;
    cfg.spec.alpha1 = 0.0;
    cfg.spec.beta1 = 1.0;
    cfg.spec.h = Nonlinearity::cubic_quintic(c2, c3);
    cfg.spec.d1 = Signal::sinusoid(0.1, 3.14159265358979323846);
    cfg.spec.phi = InitialProfile::polynomial({0.0, 0.0, 1.0, -2.0, 1.0});
    return cfg;
}

json validation_report_json(const ValidationReport& report) {
    json checks = json::array();
    for (const auto& entry : report.checks) {
        json v{{"name", entry.name}, {"passed", entry.passed}, {"detail", entry.detail}};
        if (entry.worst_location) v["worst_location"] = *entry.worst_location;
        if (entry.worst_residual) v["worst_residual"] = *entry.worst_residual;
        checks.push_back(v);
    }
    return json{{"passed", report.passed}, {"checks", checks}};
}

json verification_report_json(const VerificationReport& report) {
    json v{{"name", report.name},
           {"passed", report.passed},
           {"worst_margin", report.worst_margin},
           {"worst_t", report.worst_t},
           {"n_points_checked", report.n_points_checked},
           {"tol_rel", report.tol_rel}};
    v["worst_x"] = report.worst_x ? json(*report.worst_x) : json(nullptr);
    return v;
}

json suite_report_json(const SuiteReport& report) {
    json trials = json::array();
    for (const auto& trial : report.trials) {
        json checks = json::array();
        for (const auto& c : trial.checks) checks.push_back(verification_report_json(c));
        trials.push_back(json{{"trial", trial.trial},
                              {"passed", trial.passed},
                              {"worst_margin", trial.worst_margin},
                              {"checks", checks}});
    }
    return json{{"aggregate", verification_report_json(report.aggregate)},
                {"trials", trials}};
}

json gain_record_json(const GainSet& gains, const Nonlinearity& h) {
    return json{{"beta_coeff", gains.beta_coeff},
                {"lambda", gains.lambda},
                {"gamma", kfunction_to_json(gains.gamma)},
                {"gamma0", kfunction_to_json(gains.gamma0)},
                {"gamma1", kfunction_to_json(gains.gamma1)},
                {"nonlinearity", nonlinearity_to_json(h)}};
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::FILE* out = std::fopen(path.c_str(), "wb");
    if (!out) throw ConfigError("cannot open output file: " + path);
    const Grid& g = traj.grid();
    std::fputs("t,x,value\n", out);
    for (int n = 0; n <= g.nt; ++n)
        for (int j = 0; j < g.nx; ++j)
            std::fprintf(out, "%.17g,%.17g,%.17g\n", g.t(n), g.x(j), traj.at(n, j));
    if (std::fclose(out) != 0) throw ConfigError("failed to write output file: " + path);
}

}  // namespace isscert
