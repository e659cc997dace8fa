// Copyright 2026 The cfloquet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfloquet/cft_oracle.hpp"
#include "cfloquet/eigensolver.hpp"
#include "cfloquet/errors.hpp"
#include "cfloquet/experiment.hpp"
#include "cfloquet/fitting.hpp"
#include "cfloquet/mera.hpp"
#include "cfloquet/parallel.hpp"
#include "cfloquet/pauli_operator.hpp"
#include "cfloquet/serialization.hpp"

#ifndef CFLOQUET_GIT_DESCRIBE
#define CFLOQUET_GIT_DESCRIBE "unknown"
#endif
#ifndef CFLOQUET_VERSION
#define CFLOQUET_VERSION "0.0.0"
#endif

namespace cfloquet::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read " + path.string());
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct FileDigest {
    std::string name;
    std::string sha256;
    std::size_t bytes = 0;
};

// Options shared by every subcommand.
struct Common {
    std::string config;
    std::string output;
    std::vector<std::string> overrides;
    std::optional<unsigned> threads;
};

class Session {
  public:
    Session(std::string command, const Common &common) : command_(std::move(command)), common_(common) {}

    void load() {
        const fs::path path(common_.config);
        config_text_ = read_file(path);
        file_ = io::parse_config(config_text_, common_.overrides);
        auto &run = file_.run;
        if (!run.mera_fixture.empty()) {
            fs::path fixture(run.mera_fixture);
            if (fixture.is_relative()) {
                fixture = path.parent_path() / fixture;
            }
            const std::string text = read_file(fixture);
            run.mera_params = mera::params_from_json(text, mera::build_layout(run.N));
            add_input(fixture.string(), text);
        }
        out_dir_ = fs::path(common_.output);
        std::error_code ec;
        fs::create_directories(out_dir_, ec);
        if (ec) {
            throw ConfigError("cannot create output directory " + out_dir_.string() + ": " + ec.message());
        }
    }

    [[nodiscard]] const io::ConfigFile &file() const { return file_; }
    [[nodiscard]] const experiment::RunConfig &run() const { return file_.run; }

    void add_input(const std::string &name, const std::string &bytes) {
        inputs_.push_back({name, sha256_hex(bytes), bytes.size()});
    }

    void write(const std::string &name, const std::string &bytes) {
        const fs::path path = out_dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << bytes;
        if (!out) {
            throw ConfigError("cannot write " + path.string());
        }
        outputs_.push_back({name, sha256_hex(bytes), bytes.size()});
    }

    void finish(std::ostream &log) {
        ojson m;
        m["schema"] = 1;
        m["kind"] = "manifest";
        m["command"] = command_;
        m["version"] = CFLOQUET_VERSION;
        m["git_describe"] = CFLOQUET_GIT_DESCRIBE;
        m["config"] = {{"path", common_.config}, {"sha256", sha256_hex(config_text_)}};
        m["overrides"] = common_.overrides;
        m["resolved_config"] = ojson::parse(io::to_json(file_));
        auto digest_list = [](const std::vector<FileDigest> &files) {
            auto arr = ojson::array();
            for (const auto &f : files) {
                arr.push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
            }
            return arr;
        };
        m["inputs"] = digest_list(inputs_);
        m["outputs"] = digest_list(outputs_);
        const std::string text = m.dump(2) + "\n";
        std::ofstream out(out_dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) {
            throw ConfigError("cannot write manifest.json");
        }
        for (const auto &f : outputs_) {
            log << (out_dir_ / f.name).string() << "\n";
        }
        log << (out_dir_ / "manifest.json").string() << "\n";
    }

  private:
    std::string command_;
    Common common_;
    std::string config_text_;
    io::ConfigFile file_;
    fs::path out_dir_;
    std::vector<FileDigest> inputs_;
    std::vector<FileDigest> outputs_;
};

// JSON numbers with the same 17-digit rendering as the CSV writers.
ojson number(double v) {
    if (!std::isfinite(v)) {
        return io::format_double(v);
    }
    return v;
}

ojson number_array(const std::vector<double> &values) {
    auto arr = ojson::array();
    for (double v : values) {
        arr.push_back(number(v));
    }
    return arr;
}

std::string dump(const ojson &j) { return j.dump(2) + "\n"; }

cft::DriveSpec drive_with_velocity(const experiment::RunConfig &run, double *v_out = nullptr) {
    const double v = experiment::resolve_velocity(run);
    if (v_out != nullptr) {
        *v_out = v;
    }
    return experiment::cft_drive(run, v);
}

void cmd_phase_diagram(Session &s) {
    const auto &a = s.file().analysis;
    const cft::DriveSpec drive = drive_with_velocity(s.run());
    const cft::PhaseDiagram pd =
        cft::phase_diagram(drive, a.T0_grid.values(), a.T1_grid.values(), a.critical_tol);
    s.write("phase_diagram.csv", io::to_csv(pd));
}

void cmd_evolve(Session &s, bool normalize, bool partner_average) {
    const auto &run = s.run();
    experiment::TimeSeries series;
    if (normalize) {
        if (run.shots == 0) {
            throw ConfigError("evolve --normalize needs shots > 0");
        }
        const auto raw = experiment::run_floquet(run);
        const auto reference = experiment::run_floquet(experiment::reference_config(run));
        s.write("timeseries_raw.csv", io::to_csv(raw));
        s.write("reference.csv", io::to_csv(reference));
        series = experiment::reference_normalize(raw, reference);
    } else {
        series = experiment::run_floquet(run);
    }
    s.write("timeseries.csv", io::to_csv(series));

    if (partner_average) {
        std::ostringstream csv;
        csv << "n";
        for (int i = 0; i < series.N; ++i) {
            csv << ",bond_energy_avg_" << i;
        }
        csv << "\n";
        for (const auto &p : series.points) {
            csv << p.n;
            for (double e : experiment::average_over_partners(p.bond_energy, run.q)) {
                csv << "," << io::format_double(e);
            }
            csv << "\n";
        }
        s.write("bond_energy_avg.csv", csv.str());
    }

    ojson summary;
    summary["kind"] = "evolve_summary";
    summary["points"] = series.points.size();
    auto flagged = ojson::array();
    for (const auto &p : series.points) {
        if (p.flagged()) {
            flagged.push_back(p.n);
        }
    }
    summary["flagged_cycles"] = flagged;
    ojson prov = ojson::object();
    for (const auto &[k, v] : series.provenance) {
        prov[k] = number(v);
    }
    summary["provenance"] = prov;
    s.write("evolve_summary.json", dump(summary));
}

void cmd_prepare_mera(Session &s) {
    const auto &run = s.run();
    const auto &opts_in = s.file().mera;
    const mera::MeraLayout layout = mera::build_layout(run.N);
    const lattice::HamiltonianSpec h0 = experiment::h0_of(run);
    const sim::PauliOperator h(h0);
    sim::EigenOptions eig;
    eig.tol = 1e-10;
    const sim::GroundState gs = sim::ground_state(h, eig);

    mera::OptimizeOptions opts;
    opts.restarts = opts_in.restarts;
    opts.seed = opts_in.seed;
    opts.max_iterations = opts_in.max_iterations;
    opts.reference = &gs.state;
    const mera::MeraParams init = run.mera_params.value_or(mera::MeraParams{});
    const mera::OptimizeResult result = mera::optimize(layout, h0, init, opts);

    const sim::StateVector psi = mera::prepare_state(layout, result.params);
    const mera::FidelityMetrics fm = mera::fidelity_metrics(psi, h, gs.energy, gs.ground_space);

    s.write("mera_params.json", mera::params_to_json(layout, result.params));

    ojson m;
    m["kind"] = "mera_metrics";
    m["N"] = run.N;
    m["layout_hash"] = layout.descriptor_hash();
    m["gates"] = layout.gates.size();
    m["layers"] = layout.layer_count();
    m["energy"] = number(result.energy);
    m["exact_energy"] = number(fm.exact_energy);
    m["energy_density_error"] = number(fm.energy_density_error);
    m["infidelity"] = number(fm.infidelity);
    m["degenerate"] = fm.degenerate;
    m["converged"] = result.converged;
    m["best_restart"] = result.best_restart;
    auto restarts = ojson::array();
    for (const auto &r : result.restarts) {
        restarts.push_back({{"seed", r.seed},
                            {"energy", number(r.energy)},
                            {"iterations", r.iterations},
                            {"converged", r.converged}});
    }
    m["restarts"] = restarts;
    s.write("mera_metrics.json", dump(m));

    std::ostringstream trace;
    trace << "step,energy,infidelity\n";
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        trace << i << "," << io::format_double(result.trace[i].energy) << ","
              << io::format_double(result.trace[i].infidelity) << "\n";
    }
    s.write("mera_trace.csv", trace.str());
}

void cmd_fit_c(Session &s, const std::string &input) {
    const std::string text = read_file(input);
    s.add_input(input, text);
    const auto series = io::time_series_from_csv(text);
    const auto &a = s.file().analysis;
    const cft::DriveSpec drive = drive_with_velocity(s.run());
    const fit::FitResult result = fit::fit_central_charge(series, drive, a.c_grid, a.fit_n_min, a.fit_n_max);
    s.write("fit_result.json", io::to_json(result));
}

void cmd_cft_predict(Session &s) {
    const auto &run = s.run();
    const double c = s.file().analysis.c;
    const cft::DriveSpec drive = drive_with_velocity(run);
    const auto echo = cft::loschmidt_series(drive, static_cast<std::uint64_t>(run.cycles), c);
    std::ostringstream csv;
    csv << "n,echo,total_energy";
    for (int i = 0; i < run.N; ++i) {
        csv << ",energy_density_" << i;
    }
    csv << "\n";
    for (int n = 0; n <= run.cycles; ++n) {
        const auto un = static_cast<std::uint64_t>(n);
        csv << n << "," << io::format_double(echo[un]) << ","
            << io::format_double(cft::total_energy_cft(drive, un, c));
        // Bond centres, matching bond_energy_i on the lattice.
        for (int i = 0; i < run.N; ++i) {
            csv << "," << io::format_double(cft::energy_density_cft(drive, un, c, i + 0.5));
        }
        csv << "\n";
    }
    s.write("cft_series.csv", csv.str());
}

void cmd_peaks(Session &s) {
    double v = 0.0;
    const cft::DriveSpec drive = drive_with_velocity(s.run(), &v);
    const double tol = s.file().analysis.critical_tol;
    const cft::PhaseLabel label = cft::classify(cft::one_cycle(drive).chiral, tol);
    const cft::HeatingPeaks peaks = cft::heating_peaks(drive, tol);
    ojson j;
    j["kind"] = "heating_peaks";
    j["v"] = number(v);
    j["L"] = number(drive.L);
    j["trace_magnitude"] = number(label.trace_magnitude);
    j["chiral"] = number_array(peaks.chiral);
    j["antichiral"] = number_array(peaks.antichiral);
    j["all"] = number_array(peaks.all);
    s.write("peaks.json", dump(j));
}

void cmd_velocity(Session &s) {
    const auto &run = s.run();
    const auto est = experiment::estimate_velocity(run.model, run.N, run.velocity.delta_min);
    const auto model = experiment::effective_model(run.model);
    ojson j;
    j["kind"] = "velocity";
    j["N"] = run.N;
    j["model"] = {{"J", number(model.J)}, {"g", number(model.g)}, {"Gamma", number(model.Gamma)}};
    j["v"] = number(est.v);
    j["gap"] = number(est.gap);
    j["even_energy"] = number(est.even_energy);
    j["odd_energy"] = number(est.odd_energy);
    j["delta_min"] = number(est.delta_min);
    s.write("velocity.json", dump(j));
}

void add_common(CLI::App *sub, Common &c) {
    sub->add_option("-c,--config", c.config, "JSON run configuration")->required();
    sub->add_option("-o,--output", c.output, "Output directory")->required();
    sub->add_option("--set", c.overrides, "Override a config key, e.g. --set model.g=0.6")
        ->take_all()
        ->allow_extra_args(false);
    sub->add_option("--threads", c.threads, "Worker threads (0 = auto)");
}

} // namespace

std::string sha256_hex(const std::string &bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Driven-CFT Floquet simulation toolkit", "cfloquet"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(CFLOQUET_VERSION) + " (" + CFLOQUET_GIT_DESCRIBE + ")");

    Common common;
    std::string fit_input;
    bool normalize = false;
    bool partner_average = false;

    auto *pd = app.add_subcommand("phase-diagram", "Classify a (T0, T1) grid");
    auto *ev = app.add_subcommand("evolve", "Run the lattice Floquet evolution");
    auto *pm = app.add_subcommand("prepare-mera", "Optimize the MERA preparation circuit");
    auto *fc = app.add_subcommand("fit-c", "Fit the central charge to a time-series CSV");
    auto *cp = app.add_subcommand("cft-predict", "Closed-form echo and energy series");
    auto *pk = app.add_subcommand("peaks", "Heating-peak positions");
    auto *vl = app.add_subcommand("velocity", "Sound velocity from the parity-sector gap");
    for (auto *sub : {pd, ev, pm, fc, cp, pk, vl}) {
        add_common(sub, common);
    }
    ev->add_flag("--normalize", normalize, "Divide by a fitted reference run (shots only)");
    ev->add_flag("--partner-average", partner_average, "Also write partner-averaged bond energies");
    fc->add_option("-i,--input", fit_input, "TimeSeries CSV")->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(rev);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    CLI::App *chosen = app.get_subcommands().front();
    try {
        if (common.threads) {
            set_thread_count(*common.threads);
        }
        Session session(chosen->get_name(), common);
        session.load();
        if (chosen == pd) {
            cmd_phase_diagram(session);
        } else if (chosen == ev) {
            cmd_evolve(session, normalize, partner_average);
        } else if (chosen == pm) {
            cmd_prepare_mera(session);
        } else if (chosen == fc) {
            cmd_fit_c(session, fit_input);
        } else if (chosen == cp) {
            cmd_cft_predict(session);
        } else if (chosen == pk) {
            cmd_peaks(session);
        } else {
            cmd_velocity(session);
        }
        session.finish(out);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CapacityError &e) {
        err << "capacity error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError &e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const PhaseError &e) {
        err << "phase error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

} // namespace cfloquet::cli
