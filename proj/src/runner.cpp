#include "kahlerflow/runner.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "kahlerflow/blu.hpp"
#include "kahlerflow/geodesic.hpp"
#include "kahlerflow/potential.hpp"

namespace kahlerflow {

OutputFormat parse_format(const std::string& name) {
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    throw ConfigError("unknown output format '" + name + "' (expected csv or json)");
}

int max_threads() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("KAHLERFLOW_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v < static_cast<long>(hw)) hw = static_cast<unsigned>(v);
    }
    return static_cast<int>(hw);
}

namespace {

// fixed 17-significant-digit float rendering for byte-stable reports
std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string jstr(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string jpair(Complex v) { return "[" + num(v.real()) + "," + num(v.imag()) + "]"; }

template <typename F>
void parallel_for(std::size_t n, F&& fn) {
    std::size_t workers = std::min<std::size_t>(max_threads(), n);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            std::size_t k = next.fetch_add(1);
            if (k >= n) return;
            try {
                fn(k);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::string describe_point(const std::vector<std::string>& coords, const Point& p) {
    std::string s = "(";
    for (std::size_t m = 0; m < coords.size(); ++m) {
        if (m) s += ", ";
        s += coords[m] + "=" + num(p.at(coords[m]).real());
    }
    return s + ")";
}

GridSpec command_grid(const RunConfig& cfg, const BuiltModel& model) {
    if (cfg.grid) return *cfg.grid;
    if (model.system) return model.system->domain;
    GridSpec g;
    if (model.kind == "tstark-su2") {
        g.axes = {{"y1", -1.0, 1.0, 5}, {"y2", -1.0, 1.0, 5}, {"y3", -1.0, 1.0, 5}};
    } else if (model.separable) {
        g.axes = {{"x", -1.5, 1.5, 9}, {"y", -1.5, 1.5, 9}};
    } else {
        g.axes = {{"y", -1.5, 1.5, 9}};
    }
    return g;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (k) out += sep;
        out += parts[k];
    }
    return out;
}

std::string wrap_report(const std::string& command, const std::string& model,
                        const std::string& body_fields) {
    return "{\"command\":" + jstr(command) + ",\"model\":" + jstr(model) + "," + body_fields +
           "}\n";
}

// ---------------------------------------------------------------- evolve ---

std::string cmd_evolve(const RunConfig& cfg, const BuiltModel& model, OutputFormat format) {
    GridSpec grid = command_grid(cfg, model);
    if (model.separable) {
        if (grid.axes.size() != 2 || grid.axes[0].name != "x" || grid.axes[1].name != "y")
            throw ConfigError("separable evolve: grid axes must be x, y");
        const SeparableMap& map = *model.separable;
        std::vector<std::string> rows(cfg.taus.size() * grid.size());
        parallel_for(rows.size(), [&](std::size_t idx) {
            Complex tau = cfg.taus[idx / grid.size()];
            Point p = grid.point(idx % grid.size());
            double x = p.at("x").real(), y = p.at("y").real();
            Complex z = map.chart(tau, x, y);
            double inv_g = 2.0 * map.jacobian_det(tau, y);
            std::string cls = to_string(map.classify(tau, y));
            if (format == OutputFormat::Csv) {
                rows[idx] = num(tau.real()) + "," + num(tau.imag()) + "," + num(x) + "," + num(y) +
                            "," + num(z.real()) + "," + num(z.imag()) + "," + num(inv_g) + "," + cls;
            } else {
                rows[idx] = "{\"tau\":" + jpair(tau) + ",\"point\":[" + num(x) + "," + num(y) +
                            "],\"z\":" + jpair(z) + ",\"inverse_g\":" + num(inv_g) +
                            ",\"class\":" + jstr(cls) + "}";
            }
        });
        if (format == OutputFormat::Csv)
            return "tau_re,tau_im,x,y,re_z,im_z,inverse_g,class\n" + join(rows, "\n") + "\n";
        return wrap_report("evolve", model.kind, "\"records\":[" + join(rows, ",") + "]");
    }

    const HamSystem& sys = *model.system;
    EvolvedStructure es(sys, cfg.order);
    PotentialFlow pf(sys, cfg.order);
    int n = sys.n();
    std::vector<std::string> rows(cfg.taus.size() * grid.size());
    parallel_for(rows.size(), [&](std::size_t idx) {
        Complex tau = cfg.taus[idx / grid.size()];
        Point p = grid.point(idx % grid.size());
        HermitianMetric m;
        double kappa = 0.0;
        try {
            m = metric_at(es, tau, p);
            kappa = pf.kappa(tau, p);
        } catch (const Error& e) {
            throw Error(std::string(e.what()) + " [at " + describe_point(sys.coords(), p) + "]");
        }
        Eigen::VectorXcd z = es.chart_value(tau, p);
        std::vector<std::string> fields;
        if (format == OutputFormat::Csv) {
            fields.push_back(num(tau.real()));
            fields.push_back(num(tau.imag()));
            for (const auto& c : sys.coords()) fields.push_back(num(p.at(c).real()));
            for (int j = 0; j < n; ++j) {
                fields.push_back(num(z(j).real()));
                fields.push_back(num(z(j).imag()));
            }
            if (n == 1)
                fields.push_back(m.valid ? num(1.0 / m.g(0, 0).real()) : "nan");
            else
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        fields.push_back(m.valid ? num(m.g(j, k).real()) : "nan");
                        fields.push_back(m.valid ? num(m.g(j, k).imag()) : "nan");
                    }
            fields.push_back(to_string(m.cls.tag));
            fields.push_back(num(kappa));
            rows[idx] = join(fields, ",");
        } else {
            std::string rec = "{\"tau\":" + jpair(tau) + ",\"point\":[";
            std::vector<std::string> coords;
            for (const auto& c : sys.coords()) coords.push_back(num(p.at(c).real()));
            rec += join(coords, ",") + "],\"z\":[";
            std::vector<std::string> zs;
            for (int j = 0; j < n; ++j) zs.push_back(jpair(z(j)));
            rec += join(zs, ",") + "]";
            if (m.valid) {
                if (n == 1) {
                    rec += ",\"inverse_g\":" + num(1.0 / m.g(0, 0).real());
                } else {
                    rec += ",\"metric\":[";
                    std::vector<std::string> gs;
                    for (int j = 0; j < n; ++j)
                        for (int k = 0; k < n; ++k) gs.push_back(jpair(m.g(j, k)));
                    rec += join(gs, ",") + "]";
                }
            } else {
                rec += ",\"inverse_g\":null";
            }
            rec += ",\"class\":" + jstr(to_string(m.cls.tag)) + ",\"kappa\":" + num(kappa) + "}";
            rows[idx] = rec;
        }
    });
    if (format == OutputFormat::Csv) {
        std::vector<std::string> head{"tau_re", "tau_im"};
        for (const auto& c : sys.coords()) head.push_back(c);
        for (int j = 1; j <= n; ++j) {
            head.push_back("re_z" + std::to_string(j));
            head.push_back("im_z" + std::to_string(j));
        }
        if (n == 1)
            head.push_back("inverse_g");
        else
            for (int j = 1; j <= n; ++j)
                for (int k = 1; k <= n; ++k) {
                    head.push_back("re_g" + std::to_string(j) + std::to_string(k));
                    head.push_back("im_g" + std::to_string(j) + std::to_string(k));
                }
        head.push_back("class");
        head.push_back("kappa");
        return join(head, ",") + "\n" + join(rows, "\n") + "\n";
    }
    return wrap_report("evolve", model.kind, "\"records\":[" + join(rows, ",") + "]");
}

// ------------------------------------------------------------- potential ---

std::string cmd_potential(const RunConfig& cfg, const BuiltModel& model, OutputFormat format,
                          std::ostream& diag) {
    if (!model.system)
        throw ConfigError("the potential command needs a symbolic model (not 'bump')");
    const HamSystem& sys = *model.system;
    GridSpec grid = command_grid(cfg, model);
    EvolvedStructure es(sys, cfg.order);
    PotentialFlow pf(sys, cfg.order);
    std::vector<std::string> rows(cfg.taus.size() * grid.size());
    parallel_for(rows.size(), [&](std::size_t idx) {
        Complex tau = cfg.taus[idx / grid.size()];
        Point p = grid.point(idx % grid.size());
        double kappa = 0.0;
        std::string cls;
        try {
            kappa = pf.kappa(tau, p);
            cls = to_string(classify(es, tau, p).tag);
        } catch (const Error& e) {
            throw Error(std::string(e.what()) + " [at " + describe_point(sys.coords(), p) + "]");
        }
        if (format == OutputFormat::Csv) {
            std::vector<std::string> fields{num(tau.real()), num(tau.imag())};
            for (const auto& c : sys.coords()) fields.push_back(num(p.at(c).real()));
            fields.push_back(num(kappa));
            fields.push_back(cls);
            rows[idx] = join(fields, ",");
        } else {
            std::string rec = "{\"tau\":" + jpair(tau) + ",\"point\":[";
            std::vector<std::string> coords;
            for (const auto& c : sys.coords()) coords.push_back(num(p.at(c).real()));
            rec += join(coords, ",") + "],\"kappa\":" + num(kappa) + ",\"class\":" + jstr(cls) + "}";
            rows[idx] = rec;
        }
    });
    std::vector<std::string> summaries(cfg.taus.size());
    parallel_for(cfg.taus.size(), [&](std::size_t k) {
        PotentialVerification v = verify_potential(sys, es, cfg.taus[k], grid, cfg.fd_space_step);
        summaries[k] = "{\"tau\":" + jpair(cfg.taus[k]) +
                       ",\"max_residual\":" + num(v.max_residual) +
                       ",\"checked\":" + std::to_string(v.checked) +
                       ",\"skipped\":" + std::to_string(v.skipped) +
                       ",\"fd_step\":" + num(cfg.fd_space_step) + "}";
    });
    if (format == OutputFormat::Csv) {
        for (const auto& s : summaries) diag << "verification " << s << "\n";
        std::vector<std::string> head{"tau_re", "tau_im"};
        for (const auto& c : sys.coords()) head.push_back(c);
        head.push_back("kappa");
        head.push_back("class");
        return join(head, ",") + "\n" + join(rows, "\n") + "\n";
    }
    return wrap_report("potential", model.kind,
                       "\"records\":[" + join(rows, ",") + "],\"verification\":[" +
                           join(summaries, ",") + "]");
}

// -------------------------------------------------------------- geodesic ---

std::string cmd_geodesic(const RunConfig& cfg, const BuiltModel& model, OutputFormat format) {
    if (!model.system)
        throw ConfigError("the geodesic command needs a symbolic model (not 'bump')");
    if (cfg.t_samples.empty()) throw ConfigError("the geodesic command needs 't_samples'");
    const HamSystem& sys = *model.system;
    GridSpec grid = command_grid(cfg, model);
    GeodesicProbe probe(sys, cfg.t_samples, grid, cfg.order, cfg.fd_time_step, cfg.fd_space_step);
    probe.validate();
    std::size_t per_t = grid.size();
    std::vector<std::string> rows(cfg.t_samples.size() * per_t);
    parallel_for(rows.size(), [&](std::size_t idx) {
        double t = cfg.t_samples[idx / per_t];
        Point q = grid.point(idx % per_t);
        double phi = 0.0, vel = 0.0;
        RefinementReport rep{};
        try {
            phi = mabuchi_path_value(probe, t, q);
            vel = velocity_check(probe, t, q);
            rep = geodesic_refinement(probe, t, q);
        } catch (const Error& e) {
            throw Error(std::string(e.what()) + " [at t=" + num(t) + ", " +
                        describe_point(sys.coords(), q) + "]");
        }
        std::vector<std::string> coords;
        for (const auto& c : sys.coords()) coords.push_back(num(q.at(c).real()));
        if (format == OutputFormat::Csv) {
            rows[idx] = num(t) + "," + join(coords, ",") + "," + num(phi) + "," + num(vel) + "," +
                        num(rep.coarse) + "," + num(rep.fine);
        } else {
            rows[idx] = "{\"t\":" + num(t) + ",\"point\":[" + join(coords, ",") + "],\"phi\":" +
                        num(phi) + ",\"phidot_residual\":" + num(vel) +
                        ",\"geodesic_residual\":" + num(rep.coarse) +
                        ",\"refined_residual\":" + num(rep.fine) + "}";
        }
    });
    std::vector<std::string> speeds(cfg.t_samples.size());
    parallel_for(cfg.t_samples.size(), [&](std::size_t k) {
        MabuchiSpeed s = mabuchi_speed_quadrature(probe, cfg.t_samples[k]);
        speeds[k] = "{\"t\":" + num(cfg.t_samples[k]) + ",\"speed_quadrature\":" + num(s.value) +
                    ",\"caveat\":" + jstr(s.caveat) + "}";
    });
    if (format == OutputFormat::Csv) {
        std::vector<std::string> head{"t"};
        for (const auto& c : sys.coords()) head.push_back(c);
        head.insert(head.end(), {"phi", "phidot_residual", "geodesic_residual", "refined_residual"});
        return join(head, ",") + "\n" + join(rows, "\n") + "\n";
    }
    return wrap_report("geodesic", model.kind,
                       "\"records\":[" + join(rows, ",") + "],\"speed\":[" + join(speeds, ",") +
                           "]");
}

// ------------------------------------------------------------------- blu ---

std::string cmd_blu(const RunConfig& cfg, const BuiltModel& model, OutputFormat format) {
    if (!model.system) throw ConfigError("the blu command needs a symbolic model (not 'bump')");
    if (cfg.t_samples.empty()) throw ConfigError("the blu command needs 't_samples'");
    const HamSystem& sys = *model.system;
    GridSpec grid = command_grid(cfg, model);
    EvolvedStructure es(sys, cfg.order);
    FlowOptions opts;
    opts.tol = cfg.ode_tol;
    std::size_t per_tau = cfg.t_samples.size() * grid.size();
    std::vector<std::string> rows(cfg.taus.size() * per_tau);
    parallel_for(rows.size(), [&](std::size_t idx) {
        Complex tau = cfg.taus[idx / per_tau];
        double t = cfg.t_samples[(idx % per_tau) / grid.size()];
        Point p = grid.point(idx % grid.size());
        std::vector<std::string> coords;
        for (const auto& c : sys.coords()) coords.push_back(num(p.at(c).real()));
        std::string image = "null";
        std::string err = "null";
        std::string regime = to_string(classify(es, tau * t, p).tag);
        try {
            Point q = blu_forward(es, tau, t, p, opts);
            Point round = flow_forward(es, tau * t, q);
            double dev = 0.0;
            std::vector<std::string> img;
            for (const auto& c : sys.coords()) {
                img.push_back(num(q.at(c).real()));
                dev = std::max(dev, std::abs(round.at(c) - p.at(c)));
            }
            image = "[" + join(img, ",") + "]";
            err = num(dev);
        } catch (const LeafProjectionError&) {
            regime = "projection-undefined";
        } catch (const Error& e) {
            throw Error(std::string(e.what()) + " [at t=" + num(t) + ", " +
                        describe_point(sys.coords(), p) + "]");
        }
        if (format == OutputFormat::Csv) {
            rows[idx] = num(tau.real()) + "," + num(tau.imag()) + "," + num(t) + "," +
                        join(coords, ",") + "," + (image == "null" ? "nan,nan" : image.substr(1, image.size() - 2)) +
                        "," + (err == "null" ? "nan" : err) + "," + regime;
        } else {
            rows[idx] = "{\"tau\":" + jpair(tau) + ",\"t\":" + num(t) + ",\"point\":[" +
                        join(coords, ",") + "],\"blu_image\":" + image +
                        ",\"series_roundtrip_error\":" + err + ",\"regime_tag\":" + jstr(regime) +
                        "}";
        }
    });
    if (format == OutputFormat::Csv) {
        std::vector<std::string> head{"tau_re", "tau_im", "t"};
        for (const auto& c : sys.coords()) head.push_back(c);
        for (const auto& c : sys.coords()) head.push_back("blu_" + c);
        head.push_back("series_roundtrip_error");
        head.push_back("regime_tag");
        return join(head, ",") + "\n" + join(rows, "\n") + "\n";
    }
    return wrap_report("blu", model.kind, "\"records\":[" + join(rows, ",") + "]");
}

// ---------------------------------------------------------------- tstark ---

std::string cmd_tstark(const RunConfig& cfg, const BuiltModel& model, OutputFormat format) {
    if (!model.algebra_h)
        throw ConfigError("the tstark command needs a tstark-torus or tstark-su2 model");
    int order = cfg.order;
    if (order > 16) throw ConfigError("tstark: 'order' must be at most 16");
    GridSpec grid = command_grid(cfg, model);
    if (static_cast<int>(grid.axes.size()) != model.algebra_dim)
        throw ConfigError("tstark: grid must have one axis per algebra coordinate");
    const AlgebraHamiltonian& h = *model.algebra_h;
    Eigen::MatrixXcd endo =
        Eigen::MatrixXcd::Identity(model.group_element.rows(), model.group_element.cols());
    std::vector<std::string> rows(cfg.taus.size() * grid.size());
    parallel_for(rows.size(), [&](std::size_t idx) {
        Complex tau = cfg.taus[idx / grid.size()];
        Point p = grid.point(idx % grid.size());
        Eigen::VectorXd y(model.algebra_dim);
        for (int j = 0; j < model.algebra_dim; ++j) y(j) = p.at(grid.axes[j].name).real();
        Eigen::VectorXd u = h.grad(y);
        Eigen::MatrixXcd u_rep;
        if (model.algebra_dim == 3)
            u_rep = Su2Rep::algebra(u);
        else
            u_rep = TorusRep{model.algebra_dim}.algebra(u);
        Complex closed = tstark_closed_form(model.group_element, u_rep, tau, endo);
        Complex series = tstark_lie_series(model.group_element, u_rep, tau, endo, order);
        double residual = tstark_potential_check(h, y, tau);
        std::string cls = to_string(tstark_classification(h, y, tau));
        std::vector<std::string> ys;
        for (int j = 0; j < model.algebra_dim; ++j) ys.push_back(num(y(j)));
        if (format == OutputFormat::Csv) {
            rows[idx] = num(tau.real()) + "," + num(tau.imag()) + "," + join(ys, ",") + "," +
                        num(closed.real()) + "," + num(closed.imag()) + "," + num(series.real()) +
                        "," + num(series.imag()) + "," + num(std::abs(closed - series)) + "," +
                        num(residual) + "," + cls;
        } else {
            rows[idx] = "{\"tau\":" + jpair(tau) + ",\"y\":[" + join(ys, ",") +
                        "],\"closed_form\":" + jpair(closed) + ",\"lie_series\":" + jpair(series) +
                        ",\"difference\":" + num(std::abs(closed - series)) +
                        ",\"potential_residual\":" + num(residual) + ",\"class\":" + jstr(cls) + "}";
        }
    });
    if (format == OutputFormat::Csv) {
        std::vector<std::string> head{"tau_re", "tau_im"};
        for (const auto& ax : grid.axes) head.push_back(ax.name);
        head.insert(head.end(), {"re_closed", "im_closed", "re_series", "im_series", "difference",
                                 "potential_residual", "class"});
        return join(head, ",") + "\n" + join(rows, "\n") + "\n";
    }
    return wrap_report("tstark", model.kind, "\"records\":[" + join(rows, ",") + "]");
}

}  // namespace

std::string run_command(const std::string& command, const RunConfig& cfg, OutputFormat format,
                        std::ostream& diag) {
    BuiltModel model = build_model(cfg);
    if (command == "evolve") return cmd_evolve(cfg, model, format);
    if (command == "potential") return cmd_potential(cfg, model, format, diag);
    if (command == "geodesic") return cmd_geodesic(cfg, model, format);
    if (command == "blu") return cmd_blu(cfg, model, format);
    if (command == "tstark") return cmd_tstark(cfg, model, format);
    throw ConfigError("unknown command '" + command + "'");
}

int run_cli(const std::string& command, const std::string& config_path,
            const std::string& out_path, const std::string& format, std::ostream& out,
            std::ostream& diag) {
    try {
        RunConfig cfg = RunConfig::load(config_path);
        OutputFormat fmt = parse_format(format);
        std::string report = run_command(command, cfg, fmt, diag);
        if (out_path.empty() || out_path == "-") {
            out << report;
        } else {
            std::ofstream f(out_path);
            if (!f) throw ConfigError("cannot open output file: " + out_path);
            f << report;
        }
        return 0;
    } catch (const ConfigError& e) {
        diag << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        diag << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        diag << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace kahlerflow
