#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "mcwave/analysis.hpp"
#include "mcwave/harness.hpp"

namespace mcw {

inline constexpr const char* tool_version = "1.0.0";

// All numeric output goes through one formatter so repeated runs are
// byte-identical.
inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline WaveformKind waveform_kind_from_string(const std::string& s) {
    if (s == "cp-ofdm" || s == "cp_ofdm" || s == "cp") return WaveformKind::CpOfdm;
    if (s == "pcc-ofdm" || s == "pcc_ofdm" || s == "pcc") return WaveformKind::PccOfdm;
    if (s == "ufmc") return WaveformKind::Ufmc;
    throw std::invalid_argument("unknown waveform kind: " + s);
}

inline nlohmann::json to_json(const WaveformConfig& w) {
    return {{"kind", waveform_name(w.kind)},   {"n", w.n},
            {"n_cp", w.n_cp},                  {"filter_len", w.filter_len},
            {"filter_atten_db", w.filter_atten_db}, {"pcc_weighting", w.pcc_weighting},
            {"pcc_cp", w.pcc_cp}};
}

inline nlohmann::json to_json(const UserScenario& u) {
    return {{"subband_size", u.alloc.subband_size},
            {"start_indices", u.alloc.start_indices},
            {"guard", u.alloc.guard},
            {"constellation", u.constellation_order},
            {"tau", u.tau},
            {"dft", u.dft},
            {"gain_db", u.gain_db}};
}

inline nlohmann::json to_json(const Scenario& s) {
    nlohmann::json users = nlohmann::json::array();
    for (const auto& u : s.users) users.push_back(to_json(u));
    nlohmann::json j = {{"waveform", to_json(s.waveform)}, {"users", users},
                        {"measured_user", s.measured_user}, {"ebn0_grid", s.ebn0_grid},
                        {"frame_symbols", s.frame_symbols}, {"max_bits", s.max_bits},
                        {"min_errors", s.min_errors},       {"seed", s.seed}};
    if (s.target_ber) j["target_ber"] = *s.target_ber;
    return j;
}

namespace detail {

// Error with a config-path breadcrumb so the CLI can point at the
// offending field.
template <typename T>
T get_field(const nlohmann::json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw std::invalid_argument("config: missing field '" + where + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw std::invalid_argument("config: bad value for field '" + where + key + "'");
    }
}

template <typename T>
T get_field_or(const nlohmann::json& j, const std::string& key, const std::string& where, T fallback) {
    if (!j.contains(key)) return fallback;
    return get_field<T>(j, key, where);
}

}  // namespace detail

inline WaveformConfig waveform_from_json(const nlohmann::json& j, const std::string& where = "waveform.") {
    WaveformConfig w;
    w.kind = waveform_kind_from_string(detail::get_field<std::string>(j, "kind", where));
    w.n = detail::get_field_or(j, "n", where, 256);
    w.n_cp = detail::get_field_or(j, "n_cp", where, 32);
    w.filter_len = detail::get_field_or(j, "filter_len", where, 33);
    w.filter_atten_db = detail::get_field_or(j, "filter_atten_db", where, 40.0);
    w.pcc_weighting = detail::get_field_or(j, "pcc_weighting", where, true);
    w.pcc_cp = detail::get_field_or(j, "pcc_cp", where, 0);
    return w;
}

inline UserScenario user_from_json(const nlohmann::json& j, const std::string& where) {
    UserScenario u;
    u.alloc.subband_size = detail::get_field_or(j, "subband_size", where, 12);
    u.alloc.start_indices = detail::get_field<std::vector<int>>(j, "start_indices", where);
    u.alloc.guard = detail::get_field_or(j, "guard", where, 0);
    u.constellation_order = detail::get_field_or(j, "constellation", where, 4);
    u.tau = detail::get_field_or(j, "tau", where, 0.0);
    u.dft = detail::get_field_or(j, "dft", where, 0.0);
    u.gain_db = detail::get_field_or(j, "gain_db", where, 0.0);
    return u;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario s;
    if (!j.contains("waveform")) throw std::invalid_argument("config: missing field 'waveform'");
    s.waveform = waveform_from_json(j.at("waveform"));
    if (!j.contains("users") || !j.at("users").is_array() || j.at("users").empty())
        throw std::invalid_argument("config: 'users' must be a non-empty array");
    for (std::size_t i = 0; i < j.at("users").size(); ++i)
        s.users.push_back(user_from_json(j.at("users")[i], "users[" + std::to_string(i) + "]."));
    s.measured_user = detail::get_field_or(j, "measured_user", "", 0);
    s.ebn0_grid = detail::get_field<std::vector<double>>(j, "ebn0_grid", "");
    if (j.contains("target_ber")) s.target_ber = detail::get_field<double>(j, "target_ber", "");
    s.frame_symbols = detail::get_field_or(j, "frame_symbols", "", 20);
    s.max_bits = detail::get_field_or<long long>(j, "max_bits", "", 20'000'000);
    s.min_errors = detail::get_field_or(j, "min_errors", "", 200);
    s.seed = detail::get_field_or<std::uint64_t>(j, "seed", "", 1);
    s.validate();
    return s;
}

inline Scenario scenario_from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("config: parse error in " + path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

inline void write_ber_csv(std::ostream& os, const std::vector<BerRecord>& records) {
    os << "ebn0_db,ber,std_err,bit_errors,bits,scenario_digest\n";
    for (const auto& r : records)
        os << fmt_num(r.ebn0_db) << ',' << fmt_num(r.ber) << ',' << fmt_num(r.std_err) << ','
           << r.bit_errors << ',' << r.bits << ',' << r.scenario_digest << '\n';
}

inline void write_ber_json(std::ostream& os, const std::vector<BerRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records)
        arr.push_back({{"ebn0_db", r.ebn0_db},
                       {"ber", r.ber},
                       {"std_err", r.std_err},
                       {"bit_errors", r.bit_errors},
                       {"bits", r.bits},
                       {"upper_bound", r.upper_bound},
                       {"scenario_digest", r.scenario_digest}});
    os << arr.dump(2) << '\n';
}

inline void write_required_csv(std::ostream& os, const std::vector<RequiredResult>& results) {
    os << "offset_value,required_ebn0_db,saturated_flag\n";
    for (const auto& r : results)
        os << fmt_num(r.offset_value) << ',' << fmt_num(r.required_ebn0_db) << ',' << (r.saturated ? 1 : 0)
           << '\n';
}

inline void write_matrix_csv(std::ostream& os, const InterferenceMatrix& m, const std::string& axis_label) {
    os << "# rows=output_index cols=input_index kind="
       << (m.offset_kind == OffsetKind::Time ? "time" : "freq") << " " << axis_label << "="
       << fmt_num(m.offset) << " dim=" << m.dim << '\n';
    for (int l = 0; l < m.dim; ++l) {
        for (int k = 0; k < m.dim; ++k) {
            if (k) os << ',';
            os << fmt_num(m.at(l, k));
        }
        os << '\n';
    }
}

inline void write_psd_csv(std::ostream& os, const PsdEstimate& psd) {
    os << "freq_subcarriers,psd_db\n";
    for (std::size_t i = 0; i < psd.psd_db.size(); ++i)
        os << fmt_num(psd.freq_subcarriers[i]) << ',' << fmt_num(psd.psd_db[i]) << '\n';
}

inline void write_real_sequence_csv(std::ostream& os, const std::string& col,
                                    const std::vector<double>& values) {
    os << "index," << col << '\n';
    for (std::size_t i = 0; i < values.size(); ++i) os << i << ',' << fmt_num(values[i]) << '\n';
}

// One manifest entry per emitted file: tool version, seed and the full
// resolved config.
class Manifest {
public:
    explicit Manifest(std::uint64_t seed) : seed_(seed) {}

    void add(const std::string& filename, const nlohmann::json& resolved_config) {
        entries_.push_back({{"file", filename}, {"config", resolved_config}});
    }

    void write(const std::filesystem::path& path) const {
        nlohmann::json j = {{"tool_version", tool_version}, {"seed", seed_}, {"outputs", entries_}};
        std::ofstream out(path);
        out << j.dump(2) << '\n';
    }

private:
    std::uint64_t seed_;
    std::vector<nlohmann::json> entries_;
};

}  // namespace mcw
