#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spikewatt/error.hpp"
#include "spikewatt/format.hpp"

namespace spikewatt {

/// Every term of the NATURE environmental-cost score.
///
/// Units: U, R and E are average power draws in kW and T is wall time per
/// epoch in seconds, so T/3600 * (U + R + E) is the energy of one epoch in
/// kWh. A is a fixed per-experiment overhead in kWh.
struct NatureInputs {
    std::uint64_t n_exp = 1;
    double a_overhead_kwh = 0.0;
    double t_seconds = 0.0;
    double u_datacenter_kw = 0.0;
    double r_grid_kw = 0.0;
    double e_hardware_kw = 0.0;
    std::uint64_t epochs = 1;

    void validate() const {
        if (n_exp < 1) throw DomainError("N_exp >= 1 violated");
        if (epochs < 1) throw DomainError("epochs >= 1 violated");
        auto nonneg = [](double v, const char* symbol) {
            if (!(v >= 0.0)) throw DomainError(std::string(symbol) + " >= 0 violated (" + format_double(v) + ")");
        };
        nonneg(a_overhead_kwh, "A");
        nonneg(t_seconds, "T");
        nonneg(u_datacenter_kw, "U_datacenter");
        nonneg(r_grid_kw, "R_grid");
        nonneg(e_hardware_kw, "E_hardware");
    }
};

/// NATURE = N_exp * [A + T * (U + R + E) * epochs], in kWh.
inline double nature_score(const NatureInputs& in) {
    in.validate();
    const double epoch_kwh = in.t_seconds / 3600.0 * (in.u_datacenter_kw + in.r_grid_kw + in.e_hardware_kw);
    return static_cast<double>(in.n_exp) * (in.a_overhead_kwh + epoch_kwh * static_cast<double>(in.epochs));
}

struct GridProfile {
    std::string region;
    double kg_co2e_per_kwh = 0.0;
};

inline constexpr double pounds_per_kilogram = 2.20462;

struct Co2e {
    double kg = 0.0;
    double lb = 0.0;
};

inline Co2e co2e_from_energy(double kwh, const GridProfile& grid) {
    if (!(kwh >= 0.0)) throw DomainError("co2e_from_energy: energy " + format_double(kwh) + " kWh is negative");
    if (!(grid.kg_co2e_per_kwh >= 0.0)) throw DomainError("carbon intensity of '" + grid.region + "' is negative");
    const double kg = kwh * grid.kg_co2e_per_kwh;
    return {kg, kg * pounds_per_kilogram};
}

/// Carbon intensities keyed by region id.
///
/// File: {"regions": [{"region": "...", "kg_co2e_per_kwh": x}, ...]}
class GridTable {
public:
    static GridTable from_json(const nlohmann::json& j) {
        if (!j.is_object() || !j.contains("regions") || !j.at("regions").is_array())
            throw ConfigError("grid profile table needs a 'regions' array");
        GridTable table;
        for (const auto& r : j.at("regions")) {
            if (!r.is_object() || !r.contains("region") || !r.at("region").is_string() || !r.contains("kg_co2e_per_kwh") ||
                !r.at("kg_co2e_per_kwh").is_number())
                throw ConfigError("grid profile entries need 'region' and numeric 'kg_co2e_per_kwh'");
            GridProfile p{r.at("region").get<std::string>(), r.at("kg_co2e_per_kwh").get<double>()};
            if (!(p.kg_co2e_per_kwh >= 0.0)) throw ConfigError("carbon intensity >= 0 violated for '" + p.region + "'");
            if (!table.regions_.emplace(p.region, p).second) throw ConfigError("duplicate region '" + p.region + "'");
        }
        return table;
    }

    const GridProfile& find(const std::string& region) const {
        auto it = regions_.find(region);
        if (it == regions_.end()) throw ConfigError("unknown region '" + region + "'");
        return it->second;
    }

    std::size_t size() const { return regions_.size(); }

private:
    std::map<std::string, GridProfile> regions_;
};

/// One experiment as logged. Absent cells stay empty.
struct RunRecord {
    std::string experiment_id;
    std::optional<std::uint64_t> epochs;
    std::optional<double> seconds_per_epoch;
    std::optional<double> u_datacenter_kw;
    std::optional<double> r_grid_kw;
    std::optional<double> e_hardware_kw;
    std::optional<double> a_overhead_kwh;
    std::optional<std::uint64_t> n_exp;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct RunLog {
    std::vector<RunRecord> records;

    friend bool operator==(const RunLog&, const RunLog&) = default;
};

// Run-log CSV. First non-comment line is the header; experiment_id is
// required, the other columns may be omitted or left empty per row:
//
//   experiment_id,epochs,seconds_per_epoch,u_datacenter_kw,r_grid_kw,e_hardware_kw[,a_overhead_kwh][,n_exp]
//
// Lines starting with '#' are comments.

inline constexpr std::array<std::string_view, 8> run_log_columns = {
    "experiment_id", "epochs", "seconds_per_epoch", "u_datacenter_kw",
    "r_grid_kw",     "e_hardware_kw", "a_overhead_kwh", "n_exp"};

inline RunLog parse_run_log(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<int> column_of;  // csv column -> index into run_log_columns
    RunLog log;

    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto cells = split(text, ',');

        if (column_of.empty()) {
            std::array<bool, run_log_columns.size()> seen{};
            for (auto cell : cells) {
                const auto name = trim(cell);
                int idx = -1;
                for (std::size_t k = 0; k < run_log_columns.size(); ++k) {
                    if (run_log_columns[k] == name) idx = static_cast<int>(k);
                }
                if (idx < 0) throw ParseError("unknown column '" + std::string(name) + "'", lineno);
                if (seen[idx]) throw ParseError("duplicate column '" + std::string(name) + "'", lineno);
                seen[idx] = true;
                column_of.push_back(idx);
            }
            if (!seen[0]) throw ParseError("header lacks 'experiment_id'", lineno);
            continue;
        }

        if (cells.size() != column_of.size())
            throw ParseError("expected " + std::to_string(column_of.size()) + " fields, got " + std::to_string(cells.size()),
                             lineno);
        RunRecord rec;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto cell = trim(cells[c]);
            const auto column = run_log_columns[column_of[c]];
            if (column_of[c] == 0) {
                if (cell.empty()) throw ParseError("empty experiment_id", lineno);
                rec.experiment_id = std::string(cell);
                continue;
            }
            if (cell.empty()) continue;
            if (column == "epochs" || column == "n_exp") {
                const auto v = parse_integer(cell);
                if (!v) throw ParseError("'" + std::string(column) + "' is not an integer", lineno);
                if (*v < 1)
                    throw DomainError("line " + std::to_string(lineno) + ": " + std::string(column) + " >= 1 violated");
                (column == "epochs" ? rec.epochs : rec.n_exp) = static_cast<std::uint64_t>(*v);
                continue;
            }
            const auto v = parse_double(cell);
            if (!v) throw ParseError("'" + std::string(column) + "' is not a number", lineno);
            if (!(*v >= 0.0)) throw DomainError("line " + std::to_string(lineno) + ": " + std::string(column) + " is negative");
            if (column == "seconds_per_epoch") rec.seconds_per_epoch = *v;
            else if (column == "u_datacenter_kw") rec.u_datacenter_kw = *v;
            else if (column == "r_grid_kw") rec.r_grid_kw = *v;
            else if (column == "e_hardware_kw") rec.e_hardware_kw = *v;
            else if (column == "a_overhead_kwh") rec.a_overhead_kwh = *v;
        }
        log.records.push_back(std::move(rec));
    }
    if (log.records.empty()) throw ParseError("no records");
    return log;
}

/// Writes all columns; parse_run_log reads the output back unchanged.
inline void write_run_log(std::ostream& out, const RunLog& log) {
    for (std::size_t k = 0; k < run_log_columns.size(); ++k) out << (k ? "," : "") << run_log_columns[k];
    out << '\n';
    auto put_real = [&](const std::optional<double>& v) {
        out << ',';
        if (v) out << format_double(*v);
    };
    auto put_count = [&](const std::optional<std::uint64_t>& v) {
        out << ',';
        if (v) out << *v;
    };
    for (const auto& r : log.records) {
        out << r.experiment_id;
        put_count(r.epochs);
        put_real(r.seconds_per_epoch);
        put_real(r.u_datacenter_kw);
        put_real(r.r_grid_kw);
        put_real(r.e_hardware_kw);
        put_real(r.a_overhead_kwh);
        put_count(r.n_exp);
        out << '\n';
    }
}

/// Where a resolved value came from.
enum class Provenance { log, override_file, hardware_profile, log_row };

inline std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::log: return "log";
    case Provenance::override_file: return "override";
    case Provenance::hardware_profile: return "profile";
    case Provenance::log_row: return "log-row";
    }
    return "?";
}

/// Values that replace or fill in logged ones. JSON keys match the run-log
/// columns: n_exp, a_overhead_kwh, epochs, seconds_per_epoch,
/// u_datacenter_kw, r_grid_kw, e_hardware_kw.
struct NatureOverrides {
    std::optional<std::uint64_t> n_exp;
    std::optional<double> a_overhead_kwh;
    std::optional<std::uint64_t> epochs;
    std::optional<double> seconds_per_epoch;
    std::optional<double> u_datacenter_kw;
    std::optional<double> r_grid_kw;
    std::optional<double> e_hardware_kw;

    static NatureOverrides from_json(const nlohmann::json& j) {
        if (!j.is_object()) throw ConfigError("overrides must be a JSON object");
        NatureOverrides o;
        for (const auto& [key, value] : j.items()) {
            if (key == "n_exp" || key == "epochs") {
                if (!value.is_number_integer() || value.get<long long>() < 1) throw ConfigError(key + " >= 1 violated");
                (key == "n_exp" ? o.n_exp : o.epochs) = value.get<std::uint64_t>();
                continue;
            }
            if (!value.is_number()) throw ConfigError("override '" + key + "' must be a number");
            const double v = value.get<double>();
            if (!(v >= 0.0)) throw ConfigError("override '" + key + "' >= 0 violated");
            if (key == "a_overhead_kwh") o.a_overhead_kwh = v;
            else if (key == "seconds_per_epoch") o.seconds_per_epoch = v;
            else if (key == "u_datacenter_kw") o.u_datacenter_kw = v;
            else if (key == "r_grid_kw") o.r_grid_kw = v;
            else if (key == "e_hardware_kw") o.e_hardware_kw = v;
            else throw ConfigError("unknown override '" + key + "'");
        }
        return o;
    }
};

/// Power draws declared by a hardware profile, used only when neither the
/// log nor an override supplies them.
struct HardwareDraws {
    std::optional<double> u_datacenter_kw;
    std::optional<double> r_grid_kw;
    std::optional<double> e_hardware_kw;

    /// JSON keys: u_datacenter_kw, r_grid_kw, e_hardware_kw.
    static HardwareDraws from_json(const nlohmann::json& j) {
        if (!j.is_object()) throw ConfigError("hardware draws must be a JSON object");
        HardwareDraws h;
        for (const auto& [key, value] : j.items()) {
            if (!value.is_number() || !(value.get<double>() >= 0.0))
                throw ConfigError("hardware draw '" + key + "' must be a number >= 0");
            if (key == "u_datacenter_kw") h.u_datacenter_kw = value.get<double>();
            else if (key == "r_grid_kw") h.r_grid_kw = value.get<double>();
            else if (key == "e_hardware_kw") h.e_hardware_kw = value.get<double>();
            else throw ConfigError("unknown hardware draw '" + key + "'");
        }
        return h;
    }
};

struct NatureProvenance {
    Provenance n_exp = Provenance::log_row;
    Provenance a_overhead = Provenance::log;
    Provenance t_seconds = Provenance::log;
    Provenance u_datacenter = Provenance::log;
    Provenance r_grid = Provenance::log;
    Provenance e_hardware = Provenance::log;
    Provenance epochs = Provenance::log;
};

struct ResolvedNatureInputs {
    std::string experiment_id;
    NatureInputs inputs;
    NatureProvenance provenance;
};

/// Maps one logged experiment onto NatureInputs. Precedence per field:
/// override, then log, then hardware declaration. A physical quantity with
/// no source is an error; all missing symbols are reported together.
/// N_exp falls back to 1 since each log row is one experiment.
inline ResolvedNatureInputs build_nature_inputs(const RunRecord& record, const HardwareDraws& hardware,
                                                const NatureOverrides& overrides) {
    ResolvedNatureInputs out{record.experiment_id, {}, {}};
    std::vector<std::string> missing;

    auto pick = [&](const auto& override_value, const auto& log_value, const auto& profile_value, auto& target,
                    Provenance& prov, const char* symbol) {
        if (override_value) {
            target = *override_value;
            prov = Provenance::override_file;
        } else if (log_value) {
            target = *log_value;
            prov = Provenance::log;
        } else if (profile_value) {
            target = *profile_value;
            prov = Provenance::hardware_profile;
        } else {
            missing.emplace_back(symbol);
        }
    };
    const std::optional<double> none_real;
    const std::optional<std::uint64_t> none_count;
    auto& in = out.inputs;
    auto& pv = out.provenance;

    pick(overrides.a_overhead_kwh, record.a_overhead_kwh, none_real, in.a_overhead_kwh, pv.a_overhead, "A");
    pick(overrides.seconds_per_epoch, record.seconds_per_epoch, none_real, in.t_seconds, pv.t_seconds, "T");
    pick(overrides.u_datacenter_kw, record.u_datacenter_kw, hardware.u_datacenter_kw, in.u_datacenter_kw,
         pv.u_datacenter, "U_datacenter");
    pick(overrides.r_grid_kw, record.r_grid_kw, hardware.r_grid_kw, in.r_grid_kw, pv.r_grid, "R_grid");
    pick(overrides.e_hardware_kw, record.e_hardware_kw, hardware.e_hardware_kw, in.e_hardware_kw, pv.e_hardware,
         "E_hardware");
    pick(overrides.epochs, record.epochs, none_count, in.epochs, pv.epochs, "epochs");

    if (overrides.n_exp) {
        in.n_exp = *overrides.n_exp;
        pv.n_exp = Provenance::override_file;
    } else if (record.n_exp) {
        in.n_exp = *record.n_exp;
        pv.n_exp = Provenance::log;
    } else {
        in.n_exp = 1;
        pv.n_exp = Provenance::log_row;
    }

    if (!missing.empty()) {
        for (auto& m : missing) m += " (experiment " + record.experiment_id + ")";
        throw IncompleteInputError(std::move(missing));
    }
    in.validate();
    return out;
}

} // namespace spikewatt
