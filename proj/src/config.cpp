#include "rdfront/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rdfront {

using nlohmann::json;

ExperimentConfig default_config() { return ExperimentConfig{}; }

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["name"] = c.name;
    j["nonlinearity"] = {{"family", c.family},
                         {"n", c.n},
                         {"chi", c.chi},
                         {"table_path", c.table_path}};
    j["grid"] = {{"dx", c.grid.dx},
                 {"dt", c.grid.dt},
                 {"left_pad", c.grid.left_pad},
                 {"right_pad_min", c.grid.right_pad_min}};
    j["time"] = {{"t_final", c.t_final},
                 {"sample_ratio", c.sample_ratio},
                 {"t_first_sample", c.t_first_sample},
                 {"extra_samples", c.extra_samples},
                 {"richardson", c.richardson}};
    j["ic"] = {{"kind", c.ic_kind}, {"table_path", c.ic_table_path}};
    j["diagnostics"] = {{"lambda_front", c.diag.lambda_front},
                        {"envelope_c", c.diag.envelope_c},
                        {"recon_left", c.diag.recon_left},
                        {"recon_right", c.diag.recon_right}};
    j["wave"] = {{"grid_n", c.wave.n},
                 {"u_min", c.wave.u_min},
                 {"ode_rtol", c.wave.ode_rtol},
                 {"eps1", c.wave.eps1},
                 {"eps0", c.wave.eps0},
                 {"tail_u_min", c.wave.tail_u_min},
                 {"speed_tol", c.speed_tol}};
    j["structure"] = {{"delta0", c.delta0}, {"delta1", c.delta1}};
    j["classify"] = {{"pulled_cut", c.classify_pulled_cut},
                     {"band", c.classify_band}};
    json fits = json::array();
    for (const auto& f : c.fits)
        fits.push_back({{"model", f.model},
                        {"field", f.field},
                        {"t_min", f.t_min},
                        {"t_max", f.t_max},
                        {"target", f.target},
                        {"tolerance", f.tolerance}});
    j["fits"] = fits;
    j["kernels"] = {{"variant", c.kernel_variant}};
    j["output"] = {{"write_tables", c.write_tables},
                   {"deterministic", c.deterministic}};
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    auto get = [](const json& o, const char* k, auto dflt) {
        using T = decltype(dflt);
        if (o.contains(k)) return o.at(k).template get<T>();
        return dflt;
    };
    c.name = get(j, "name", std::string("run"));
    if (j.contains("nonlinearity")) {
        const auto& o = j.at("nonlinearity");
        c.family = get(o, "family", std::string("fkpp"));
        c.n = get(o, "n", 2.0);
        c.chi = get(o, "chi", 0.0);
        c.table_path = get(o, "table_path", std::string());
    }
    if (j.contains("grid")) {
        const auto& o = j.at("grid");
        c.grid.dx = get(o, "dx", 0.05);
        c.grid.dt = get(o, "dt", 0.025);
        c.grid.left_pad = get(o, "left_pad", 80.0);
        c.grid.right_pad_min = get(o, "right_pad_min", 120.0);
    }
    if (j.contains("time")) {
        const auto& o = j.at("time");
        c.t_final = get(o, "t_final", 100.0);
        c.sample_ratio = get(o, "sample_ratio", 1.05);
        c.t_first_sample = get(o, "t_first_sample", 1.0);
        c.extra_samples = get(o, "extra_samples", std::vector<double>{});
        c.richardson = get(o, "richardson", false);
    }
    if (j.contains("ic")) {
        const auto& o = j.at("ic");
        c.ic_kind = get(o, "kind", std::string("step"));
        c.ic_table_path = get(o, "table_path", std::string());
    }
    if (j.contains("diagnostics")) {
        const auto& o = j.at("diagnostics");
        c.diag.lambda_front = get(o, "lambda_front", 20.0);
        c.diag.envelope_c = get(o, "envelope_c", 8.0);
        c.diag.recon_left = get(o, "recon_left", 40.0);
        c.diag.recon_right = get(o, "recon_right", 60.0);
    }
    if (j.contains("wave")) {
        const auto& o = j.at("wave");
        c.wave.n = get(o, "grid_n", std::size_t(4097));
        c.wave.u_min = get(o, "u_min", 1e-7);
        c.wave.ode_rtol = get(o, "ode_rtol", 1e-12);
        c.wave.eps1 = get(o, "eps1", 1e-8);
        c.wave.eps0 = get(o, "eps0", 1e-10);
        c.wave.tail_u_min = get(o, "tail_u_min", 1e-100);
        c.speed_tol = get(o, "speed_tol", 1e-8);
    }
    if (j.contains("structure")) {
        const auto& o = j.at("structure");
        c.delta0 = get(o, "delta0", 0.009);
        c.delta1 = get(o, "delta1", 0.009);
    }
    if (j.contains("classify")) {
        const auto& o = j.at("classify");
        c.classify_pulled_cut = get(o, "pulled_cut", -0.5);
        c.classify_band = get(o, "band", 0.1);
    }
    if (j.contains("fits")) {
        for (const auto& o : j.at("fits")) {
            FitSpec f;
            f.model = get(o, "model", std::string());
            f.field = get(o, "field", std::string("E_front"));
            f.t_min = get(o, "t_min", 0.0);
            f.t_max = get(o, "t_max", 0.0);
            f.target = get(o, "target", 0.0);
            f.tolerance = get(o, "tolerance", 0.0);
            c.fits.push_back(f);
        }
    }
    if (j.contains("kernels"))
        c.kernel_variant = get(j.at("kernels"), "variant", std::string("auto"));
    if (j.contains("output")) {
        const auto& o = j.at("output");
        c.write_tables = get(o, "write_tables", true);
        c.deterministic = get(o, "deterministic", true);
    }
    validate_config(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json j = json::parse(in);
    return config_from_json(j);
}

std::string canonical_dump(const ExperimentConfig& c) {
    return config_to_json(c).dump();  // object keys are sorted
}

void validate_config(const ExperimentConfig& c) {
    if (!(c.grid.dx > 0.0 && c.grid.dx <= 0.2))
        throw std::domain_error("config: grid.dx must lie in (0, 0.2]");
    if (!(c.grid.dt > 0.0 && c.grid.dt <= c.grid.dx))
        throw std::domain_error("config: grid.dt must lie in (0, dx]");
    if (!(c.grid.left_pad > 0.0 && c.grid.right_pad_min > 0.0))
        throw std::domain_error("config: pads must be positive");
    if (!(c.t_final >= 0.0))
        throw std::domain_error("config: time.t_final must be >= 0");
    if (!(c.sample_ratio > 1.0))
        throw std::domain_error("config: time.sample_ratio must exceed 1");
    if (!(c.speed_tol > 0.0 && c.speed_tol <= 1e-3))
        throw std::domain_error("config: wave.speed_tol must lie in (0, 1e-3]");
    if (!(c.wave.n >= 257))
        throw std::domain_error("config: wave.grid_n too small");
    if (!c.deterministic)
        throw std::domain_error("config: deterministic must stay true");
    ic_kind_from_string(c.ic_kind);
}

Nonlinearity nonlinearity_from_config(const ExperimentConfig& c) {
    if (c.family == "fkpp") return make_fkpp();
    if (c.family == "hadeler_rothe") return make_hadeler_rothe(c.n, c.chi);
    if (c.family == "generalized_hr") {
        // built-in power-law A(u) = u^n
        const double n = c.n;
        FuncBundle A;
        A.value = [n](double u) { return std::pow(u, n); };
        A.d1 = [n](double u) { return n * std::pow(u, n - 1); };
        A.d2 = [n](double u) { return n * (n - 1) * std::pow(u, n - 2); };
        A.d3 = [n](double u) {
            return n * (n - 1) * (n - 2) * std::pow(u, std::max(n - 3.0, 0.0));
        };
        return make_generalized_hr(A, c.chi);
    }
    if (c.family == "tabulated") return normalize(make_tabulated(c.table_path));
    throw std::domain_error("config: unsupported nonlinearity.family " +
                            c.family);
}

}  // namespace rdfront
