#pragma once

#include <functional>

#include "mcwave/io.hpp"
#include "mcwave/scenarios.hpp"

namespace mcw {

enum class SweepFamily {
    AwgnCurves,
    TimeOffsetCurves,
    FreqOffsetCurves,
    RequiredVsTau,
    RequiredVsDft,
    TwoUserGrid,
    Spectra,
    Envelopes,
    IciSurfaces,
};

inline SweepFamily sweep_family_from_string(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(c));
    if (s == "awgn_curves") return SweepFamily::AwgnCurves;
    if (s == "time_offset_curves") return SweepFamily::TimeOffsetCurves;
    if (s == "freq_offset_curves") return SweepFamily::FreqOffsetCurves;
    if (s == "required_vs_tau") return SweepFamily::RequiredVsTau;
    if (s == "required_vs_dft") return SweepFamily::RequiredVsDft;
    if (s == "two_user_grid") return SweepFamily::TwoUserGrid;
    if (s == "spectra") return SweepFamily::Spectra;
    if (s == "envelopes") return SweepFamily::Envelopes;
    if (s == "ici_surfaces") return SweepFamily::IciSurfaces;
    throw std::invalid_argument("unknown sweep family: " + s);
}

struct SweepOptions {
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 1;
    std::string format = "csv";  // csv or json for BER tables
    nlohmann::json overrides = nlohmann::json::object();
};

namespace detail {

inline void apply_scenario_overrides(Scenario& s, const nlohmann::json& o) {
    if (o.contains("min_errors")) s.min_errors = o.at("min_errors").get<int>();
    if (o.contains("max_bits")) s.max_bits = o.at("max_bits").get<long long>();
    if (o.contains("frame_symbols")) s.frame_symbols = o.at("frame_symbols").get<int>();
    if (o.contains("ebn0_grid")) s.ebn0_grid = o.at("ebn0_grid").get<std::vector<double>>();
}

inline std::vector<int> override_mods(const nlohmann::json& o, std::vector<int> fallback) {
    if (o.contains("mods")) return o.at("mods").get<std::vector<int>>();
    return fallback;
}

struct SweepContext {
    const SweepOptions& opt;
    Manifest& manifest;

    void emit_ber(const std::string& name, const Scenario& s) const {
        const std::vector<BerRecord> records = run_ber(s, opt.threads);
        const std::string file = name + (opt.format == "json" ? ".json" : ".csv");
        std::ofstream out(opt.out_dir / file);
        if (opt.format == "json")
            write_ber_json(out, records);
        else
            write_ber_csv(out, records);
        manifest.add(file, to_json(s));
    }

    void emit_required(const std::string& name, const std::vector<double>& offsets,
                       const std::function<Scenario(double)>& make, double target) const {
        std::vector<RequiredResult> results;
        nlohmann::json configs = nlohmann::json::array();
        for (double off : offsets) {
            Scenario s = make(off);
            RequiredResult r = required_ebn0(s, target, opt.threads);
            r.offset_value = off;
            results.push_back(r);
            configs.push_back(to_json(s));
        }
        const std::string file = name + ".csv";
        std::ofstream out(opt.out_dir / file);
        write_required_csv(out, results);
        manifest.add(file, {{"target_ber", target}, {"scenarios", configs}});
    }
};

inline std::vector<double> linspace_step(double lo, double hi, double step) {
    std::vector<double> v;
    for (double x = lo; x <= hi + 1e-12; x += step) v.push_back(std::abs(x) < 1e-12 ? 0.0 : x);
    return v;
}

}  // namespace detail

inline void run_sweep(SweepFamily family, const SweepOptions& opt) {
    std::filesystem::create_directories(opt.out_dir);
    Manifest manifest(opt.seed);
    detail::SweepContext ctx{opt, manifest};
    const nlohmann::json& o = opt.overrides;
    const std::vector<WaveformKind> kinds = {WaveformKind::CpOfdm, WaveformKind::PccOfdm, WaveformKind::Ufmc};

    auto single = [&](WaveformKind k, int mod, double tau, double dft) {
        Scenario s = single_user_scenario(k, mod, tau, dft, {}, opt.seed);
        detail::apply_scenario_overrides(s, o);
        return s;
    };

    switch (family) {
        case SweepFamily::AwgnCurves:
        case SweepFamily::TimeOffsetCurves:
        case SweepFamily::FreqOffsetCurves: {
            double tau = 0.0, dft = 0.0;
            std::string prefix = "awgn";
            if (family == SweepFamily::TimeOffsetCurves) {
                tau = o.value("tau", 0.05);
                prefix = "time_offset";
            } else if (family == SweepFamily::FreqOffsetCurves) {
                dft = o.value("dft", 0.05);
                prefix = "freq_offset";
            }
            for (WaveformKind k : kinds)
                for (int mod : detail::override_mods(o, {4, 16, 64}))
                    ctx.emit_ber(prefix + "_" + waveform_name(k) + "_" + std::to_string(mod) + "qam",
                                 single(k, mod, tau, dft));
            // The PCC weighting comparison rides along with each family.
            for (int mod : detail::override_mods(o, {4, 16, 64})) {
                Scenario s = single(WaveformKind::PccOfdm, mod, tau, dft);
                s.waveform.pcc_weighting = false;
                ctx.emit_ber(prefix + "_pcc-ofdm-noweight_" + std::to_string(mod) + "qam", s);
            }
            break;
        }
        case SweepFamily::RequiredVsTau:
        case SweepFamily::RequiredVsDft: {
            const bool is_tau = family == SweepFamily::RequiredVsTau;
            const double target = o.value("target_ber", 1e-2);
            const std::vector<double> offsets = detail::linspace_step(-0.2, 0.2, 0.02);
            for (WaveformKind k : kinds) {
                for (int mod : detail::override_mods(o, {4, 16})) {
                    ctx.emit_required(
                        std::string("required_vs_") + (is_tau ? "tau" : "dft") + "_" + waveform_name(k) +
                            "_" + std::to_string(mod) + "qam",
                        offsets,
                        [&](double off) {
                            return is_tau ? single(k, mod, off, 0.0) : single(k, mod, 0.0, off);
                        },
                        target);
                }
            }
            break;
        }
        case SweepFamily::TwoUserGrid: {
            struct Case {
                const char* name;
                double tau2, dft2;
            };
            const std::vector<Case> cases = {{"tau0.05", 0.05, 0.0},
                                             {"dft0.05", 0.0, 0.05},
                                             {"dft0.2", 0.0, 0.2},
                                             {"tau0.05_dft0.05", 0.05, 0.05},
                                             {"tau0.05_dft0.2", 0.05, 0.2}};
            for (const auto& cs : cases)
                for (int guard : {0, 12})
                    for (double gain : {0.0, 10.0})
                        for (WaveformKind k : kinds)
                            for (int mod : detail::override_mods(o, {4, 64})) {
                                Scenario s = two_user_scenario(k, mod, guard, gain, cs.tau2, cs.dft2, {},
                                                               opt.seed);
                                detail::apply_scenario_overrides(s, o);
                                char name[128];
                                std::snprintf(name, sizeof(name), "two_user_%s_guard%d_gain%g_%s_%dqam",
                                              cs.name, guard, gain, waveform_name(k), mod);
                                ctx.emit_ber(name, s);
                            }
            break;
        }
        case SweepFamily::Spectra: {
            for (WaveformKind k : kinds) {
                const WaveformConfig cfg = canonical_waveform(k);
                SubbandAllocation alloc;
                alloc.subband_size = 12;
                alloc.guard = 12;
                alloc.start_indices = {116, 140};
                SeededRng rng(opt.seed, 0x505D);
                const PsdEstimate psd = psd_estimate(cfg, alloc, o.value("num_symbols", 600), rng);
                const std::string file = std::string("spectrum_") + waveform_name(k) + ".csv";
                std::ofstream out(opt.out_dir / file);
                write_psd_csv(out, psd);
                manifest.add(file, to_json(cfg));
            }
            break;
        }
        case SweepFamily::Envelopes: {
            for (WaveformKind k : kinds) {
                const WaveformConfig cfg = canonical_waveform(k);
                SubbandAllocation alloc;
                alloc.subband_size = 12;
                alloc.start_indices = {122};
                SeededRng rng(opt.seed, 0xE4E);
                const auto env = symbol_envelope(cfg, alloc, o.value("num_symbols", 400), rng);
                const std::string file = std::string("envelope_") + waveform_name(k) + ".csv";
                std::ofstream out(opt.out_dir / file);
                write_real_sequence_csv(out, "envelope", env);
                manifest.add(file, to_json(cfg));
            }
            break;
        }
        case SweepFamily::IciSurfaces: {
            const int n = o.value("n", 256);
            // Magnitude response around the diagonal for a sweep of
            // offsets; one CSV per receiver structure.
            auto emit_surface = [&](const std::string& name, OffsetKind okind, bool pcc, bool weight) {
                const std::string file = "ici_" + name + ".csv";
                std::ofstream out(opt.out_dir / file);
                const int halfwin = 16;
                out << "offset";
                for (int d = -halfwin; d <= halfwin; ++d) out << ",d" << d;
                out << '\n';
                const std::vector<double> offsets =
                    okind == OffsetKind::Time ? detail::linspace_step(0, 32, 1) : detail::linspace_step(0, 2, 0.05);
                for (double off : offsets) {
                    InterferenceMatrix m = okind == OffsetKind::Time
                                               ? ici_time(n, static_cast<int>(off))
                                               : ici_freq(n, off);
                    if (pcc) m = ischi(m, weight);
                    const int center = m.dim / 2;
                    out << fmt_num(okind == OffsetKind::Time ? off / n : off);
                    for (int d = -halfwin; d <= halfwin; ++d)
                        out << ',' << fmt_num(m.at(center + d, center));
                    out << '\n';
                }
                manifest.add(file, {{"n", n}});
            };
            emit_surface("time_plain", OffsetKind::Time, false, false);
            emit_surface("time_pcc_noweight", OffsetKind::Time, true, false);
            emit_surface("time_pcc_weighted", OffsetKind::Time, true, true);
            emit_surface("freq_plain", OffsetKind::Freq, false, false);
            emit_surface("freq_pcc_noweight", OffsetKind::Freq, true, false);
            emit_surface("freq_pcc_weighted", OffsetKind::Freq, true, true);
            break;
        }
    }
    manifest.write(opt.out_dir / "manifest.json");
}

}  // namespace mcw
