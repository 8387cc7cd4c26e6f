#pragma once

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spikewatt/spikewatt.hpp"

namespace spikewatt::cli {

enum class OutputFormat { csv, structured };

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::filesystem::path output_dir = ".";
    OutputFormat format = OutputFormat::csv;
};

/// Seed used when neither --seed nor a config file supplies one.
inline constexpr std::uint64_t default_seed = 1;

struct CommandOutcome {
    int exit_code = 0;
    std::vector<std::filesystem::path> artifacts;
    std::string message;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int domain = 1;
inline constexpr int io = 2;
} // namespace exit_code

/// Runs `body` and maps failures onto the exit-code contract: parse and
/// I/O failures exit 2, every other library error exits 1.
template <typename Body>
CommandOutcome guarded(Body&& body) {
    try {
        return CommandOutcome{exit_code::ok, body(), {}};
    } catch (const ParseError& e) {
        return {exit_code::io, {}, std::string("parse error: ") + e.what()};
    } catch (const IoError& e) {
        return {exit_code::io, {}, std::string("I/O error: ") + e.what()};
    } catch (const nlohmann::json::parse_error& e) {
        return {exit_code::io, {}, std::string("parse error: ") + e.what()};
    } catch (const IncompleteInputError& e) {
        return {exit_code::domain, {}, std::string("incomplete input: ") + e.what()};
    } catch (const ConfigError& e) {
        return {exit_code::domain, {}, std::string("invalid configuration: ") + e.what()};
    } catch (const Error& e) {
        return {exit_code::domain, {}, std::string("error: ") + e.what()};
    } catch (const nlohmann::json::exception& e) {
        return {exit_code::domain, {}, std::string("invalid configuration: ") + e.what()};
    }
}

inline nlohmann::json load_json(const std::filesystem::path& path) {
    const auto text = read_text_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

inline std::string extension(OutputFormat f) { return f == OutputFormat::csv ? ".csv" : ".json"; }

inline std::string counts_csv(const EventCounts& c) {
    std::ostringstream out;
    out << "synaptic_events,output_spikes,steps\n" << c.synaptic_events << ',' << c.output_spikes << ',' << c.steps << '\n';
    return out.str();
}

inline nlohmann::ordered_json counts_json(const EventCounts& c) {
    return {{"synaptic_events", c.synaptic_events}, {"output_spikes", c.output_spikes}, {"steps", c.steps}};
}

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

// train-stdp ---------------------------------------------------------------

inline CommandOutcome cmd_train_stdp(const std::filesystem::path& config_path, const GlobalOptions& opts) {
    return guarded([&] {
        auto j = load_json(config_path);
        if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
        if (opts.seed) j["seed"] = *opts.seed;
        const auto config = pattern_config_from_json(j);
        const auto result = train_pattern_detector(config);
        const auto& r = result.report;

        ArtifactSet files(opts.output_dir);
        const auto ext = extension(opts.format);
        if (opts.format == OutputFormat::csv) {
            std::ostringstream out;
            out << "hit_rate,false_alarm_rate,synaptic_events,output_spikes,training_hit_rate,training_false_alarm_rate,"
                   "seed\n"
                << format_double(r.hit_rate) << ',' << format_double(r.false_alarm_rate) << ','
                << r.counts.synaptic_events << ',' << r.counts.output_spikes << ',' << format_double(r.training_hit_rate)
                << ',' << format_double(r.training_false_alarm_rate) << ',' << config.seed << '\n';
            files.add("detection_report" + ext, out.str());
            files.add("event_counts" + ext, counts_csv(r.counts));
        } else {
            nlohmann::ordered_json report = {{"hit_rate", r.hit_rate},
                                             {"false_alarm_rate", r.false_alarm_rate},
                                             {"synaptic_events", r.counts.synaptic_events},
                                             {"output_spikes", r.counts.output_spikes},
                                             {"training_hit_rate", r.training_hit_rate},
                                             {"training_false_alarm_rate", r.training_false_alarm_rate},
                                             {"seed", config.seed},
                                             {"presentations", config.presentations},
                                             {"eval_presentations", config.eval_presentations}};
            files.add("detection_report" + ext, dump(report));
            files.add("event_counts" + ext, dump(counts_json(r.counts)));
        }

        std::ostringstream weights;
        weights << "afferent,weight\n";
        for (std::size_t i = 0; i < result.weights.size(); ++i) weights << i << ',' << format_double(result.weights[i]) << '\n';
        files.add("weights.csv", weights.str());
        return files.commit();
    });
}

// simulate-conv ------------------------------------------------------------

struct ConvOptions {
    std::filesystem::path kernel_path;
    /// Intensity matrix in [0,1]; when empty a uniform height x width image
    /// of intensity `rate` is used.
    std::optional<std::filesystem::path> input_path;
    std::size_t height = 28;
    std::size_t width = 28;
    double rate = 0.1;
    double max_rate = 1.0;
    std::size_t steps = 20;
    double gamma = 1.0;
    bool fire_once = false;
};

inline CommandOutcome cmd_simulate_conv(const ConvOptions& conv, const GlobalOptions& opts) {
    return guarded([&] {
        std::istringstream kernel_text(read_text_file(conv.kernel_path));
        const auto kernel = read_kernel_text(kernel_text);

        Grid<double> intensity;
        if (conv.input_path) {
            std::istringstream input_text(read_text_file(*conv.input_path));
            intensity = read_matrix_text(input_text);
        } else {
            if (!(conv.rate >= 0.0 && conv.rate <= 1.0)) throw ConfigError("rate ∈ [0,1] violated");
            intensity = Grid<double>(conv.height, conv.width, conv.rate);
        }
        const ConvParams params{conv.gamma, conv.fire_once};
        params.validate();
        const auto inputs = rate_encode(intensity, conv.steps, conv.max_rate, opts.seed.value_or(default_seed));
        const auto run = run_conv_layer(inputs, kernel, params);
        const auto macs = count_macs_dense_conv(inputs.height(), inputs.width(), kernel.radius(), inputs.steps());

        ArtifactSet files(opts.output_dir);
        std::ostringstream in_csv, out_csv;
        write_spikes_csv(in_csv, inputs);
        write_spikes_csv(out_csv, run.output);
        files.add("input_spikes.csv", in_csv.str());
        files.add("output_spikes.csv", out_csv.str());

        const auto ext = extension(opts.format);
        if (opts.format == OutputFormat::csv) {
            std::ostringstream out;
            out << "input_spikes,synaptic_events,output_spikes,steps,dense_macs\n"
                << inputs.spike_count() << ',' << run.counts.synaptic_events << ',' << run.counts.output_spikes << ','
                << run.counts.steps << ',' << macs << '\n';
            files.add("conv_summary" + ext, out.str());
        } else {
            auto j = counts_json(run.counts);
            j["input_spikes"] = inputs.spike_count();
            j["dense_macs"] = macs;
            files.add("conv_summary" + ext, dump(j));
        }
        return files.commit();
    });
}

// compare-energy -----------------------------------------------------------

inline std::string ratio_text(const std::optional<double>& ratio) { return ratio ? format_double(*ratio) : "unbounded"; }

/// Workload file: one workload object or {"workloads": [...]}.
inline CommandOutcome cmd_compare_energy(const std::filesystem::path& workload_path,
                                         const std::filesystem::path& profile_path, const GlobalOptions& opts) {
    return guarded([&] {
        const auto spec = load_json(workload_path);
        const auto profile = energy_profile_from_json(load_json(profile_path));
        const auto seed = opts.seed.value_or(default_seed);

        std::vector<ConvWorkload> workloads;
        if (spec.is_object() && spec.contains("workloads")) {
            if (!spec.at("workloads").is_array()) throw ConfigError("'workloads' must be an array");
            for (const auto& w : spec.at("workloads")) workloads.push_back(conv_workload_from_json(w, seed));
        } else {
            workloads.push_back(conv_workload_from_json(spec, seed));
        }
        if (opts.seed) {
            for (auto& w : workloads) w.seed = *opts.seed;
        }

        std::vector<EnergyComparison> rows;
        for (const auto& w : workloads) rows.push_back(compare_energy(w, profile));

        ArtifactSet files(opts.output_dir);
        if (opts.format == OutputFormat::csv) {
            std::ostringstream out;
            out << "workload,macs,events,ann_joules,snn_joules,ratio\n";
            for (const auto& c : rows) {
                out << c.workload << ',' << c.macs << ',' << c.events << ',' << format_double(c.ann_joules) << ','
                    << format_double(c.snn_joules) << ',' << ratio_text(c.ratio) << '\n';
            }
            files.add("energy_comparison.csv", out.str());
        } else {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (const auto& c : rows) {
                nlohmann::ordered_json row = {{"workload", c.workload},     {"macs", c.macs},
                                              {"events", c.events},         {"ann_joules", c.ann_joules},
                                              {"snn_joules", c.snn_joules}, {"ratio", ratio_text(c.ratio)}};
                if (c.ratio) row["ratio"] = *c.ratio;
                arr.push_back(row);
            }
            files.add("energy_comparison.json", dump({{"comparisons", arr}}));
        }
        return files.commit();
    });
}

// nature-report ------------------------------------------------------------

struct NatureReportOptions {
    std::filesystem::path runlog_path;
    std::string region;
    std::filesystem::path grid_profiles_path;
    std::optional<std::filesystem::path> overrides_path;
    std::optional<std::filesystem::path> hardware_path;
};

struct NatureRow {
    ResolvedNatureInputs resolved;
    double kwh = 0.0;
    Co2e co2e;
};

inline std::string aligned_table(const std::vector<std::vector<std::string>>& cells) {
    std::vector<std::size_t> widths;
    for (const auto& row : cells) {
        widths.resize(std::max(widths.size(), row.size()), 0);
        for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << "  ";
            // First column left-aligned, numbers right-aligned.
            if (c == 0) out << std::left << std::setw(static_cast<int>(widths[c])) << row[c];
            else out << std::right << std::setw(static_cast<int>(widths[c])) << row[c];
        }
        out << '\n';
    }
    return out.str();
}

inline CommandOutcome cmd_nature_report(const NatureReportOptions& nr, const GlobalOptions& opts) {
    return guarded([&] {
        const auto grids = GridTable::from_json(load_json(nr.grid_profiles_path));
        const auto& grid = grids.find(nr.region);
        NatureOverrides overrides;
        if (nr.overrides_path) overrides = NatureOverrides::from_json(load_json(*nr.overrides_path));
        HardwareDraws hardware;
        if (nr.hardware_path) hardware = HardwareDraws::from_json(load_json(*nr.hardware_path));

        std::istringstream log_text(read_text_file(nr.runlog_path));
        const auto log = parse_run_log(log_text);

        std::vector<NatureRow> rows;
        std::vector<std::string> missing;
        for (const auto& rec : log.records) {
            try {
                auto resolved = build_nature_inputs(rec, hardware, overrides);
                const double kwh = nature_score(resolved.inputs);
                rows.push_back({std::move(resolved), kwh, co2e_from_energy(kwh, grid)});
            } catch (const IncompleteInputError& e) {
                missing.insert(missing.end(), e.missing().begin(), e.missing().end());
            }
        }
        if (!missing.empty()) throw IncompleteInputError(std::move(missing));

        std::uint64_t total_exp = 0;
        double total_kwh = 0.0;
        for (const auto& r : rows) {
            total_exp += r.resolved.inputs.n_exp;
            total_kwh += r.kwh;
        }
        const auto total_co2 = co2e_from_energy(total_kwh, grid);

        const std::vector<std::string> header = {
            "experiment_id", "n_exp", "a_overhead_kwh", "seconds_per_epoch", "u_datacenter_kw", "r_grid_kw",
            "e_hardware_kw", "epochs", "nature_kwh", "co2e_kg", "co2e_lb", "region", "provenance"};
        std::vector<std::vector<std::string>> table{header};
        for (const auto& r : rows) {
            const auto& in = r.resolved.inputs;
            const auto& pv = r.resolved.provenance;
            std::string prov = "N_exp=" + std::string(to_string(pv.n_exp)) + ";A=" + std::string(to_string(pv.a_overhead)) +
                               ";T=" + std::string(to_string(pv.t_seconds)) +
                               ";U_datacenter=" + std::string(to_string(pv.u_datacenter)) +
                               ";R_grid=" + std::string(to_string(pv.r_grid)) +
                               ";E_hardware=" + std::string(to_string(pv.e_hardware)) +
                               ";epochs=" + std::string(to_string(pv.epochs));
            table.push_back({r.resolved.experiment_id, std::to_string(in.n_exp), format_double(in.a_overhead_kwh),
                             format_double(in.t_seconds), format_double(in.u_datacenter_kw), format_double(in.r_grid_kw),
                             format_double(in.e_hardware_kw), std::to_string(in.epochs), format_double(r.kwh),
                             format_double(r.co2e.kg), format_double(r.co2e.lb), grid.region, prov});
        }
        table.push_back({"TOTAL", std::to_string(total_exp), "", "", "", "", "", "", format_double(total_kwh),
                         format_double(total_co2.kg), format_double(total_co2.lb), grid.region, ""});

        ArtifactSet files(opts.output_dir);
        if (opts.format == OutputFormat::csv) {
            std::ostringstream out;
            for (const auto& row : table) {
                for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
                out << '\n';
            }
            files.add("nature_report.csv", out.str());
        } else {
            nlohmann::ordered_json experiments = nlohmann::ordered_json::array();
            for (const auto& r : rows) {
                const auto& in = r.resolved.inputs;
                const auto& pv = r.resolved.provenance;
                experiments.push_back({{"experiment_id", r.resolved.experiment_id},
                                       {"n_exp", in.n_exp},
                                       {"a_overhead_kwh", in.a_overhead_kwh},
                                       {"seconds_per_epoch", in.t_seconds},
                                       {"u_datacenter_kw", in.u_datacenter_kw},
                                       {"r_grid_kw", in.r_grid_kw},
                                       {"e_hardware_kw", in.e_hardware_kw},
                                       {"epochs", in.epochs},
                                       {"nature_kwh", r.kwh},
                                       {"co2e_kg", r.co2e.kg},
                                       {"co2e_lb", r.co2e.lb},
                                       {"provenance",
                                        {{"N_exp", to_string(pv.n_exp)},
                                         {"A", to_string(pv.a_overhead)},
                                         {"T", to_string(pv.t_seconds)},
                                         {"U_datacenter", to_string(pv.u_datacenter)},
                                         {"R_grid", to_string(pv.r_grid)},
                                         {"E_hardware", to_string(pv.e_hardware)},
                                         {"epochs", to_string(pv.epochs)}}}});
            }
            nlohmann::ordered_json report = {
                {"region", grid.region},
                {"kg_co2e_per_kwh", grid.kg_co2e_per_kwh},
                {"experiments", experiments},
                {"aggregate",
                 {{"n_exp", total_exp}, {"nature_kwh", total_kwh}, {"co2e_kg", total_co2.kg}, {"co2e_lb", total_co2.lb}}}};
            files.add("nature_report.json", dump(report));
        }
        files.add("nature_report.txt", aligned_table(table));
        return files.commit();
    });
}

} // namespace spikewatt::cli
