// Command-line front end: BER runs, required-Eb/N0 searches, canonical
// sweeps and the analysis dumps (ICI matrices, PSDs, envelopes).

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "mcwave/mcwave.hpp"

namespace {

int parse_mod(const std::string& s) {
    if (s == "4" || s == "4qam" || s == "qpsk") return 4;
    if (s == "16" || s == "16qam") return 16;
    if (s == "64" || s == "64qam") return 64;
    throw CLI::ValidationError("--mod", "expected 4qam, 16qam or 64qam");
}

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 1;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config_path, "scenario config file (JSON)");
    cmd->add_option("--seed", c.seed, "base RNG seed");
    cmd->add_option("--out-dir", c.out_dir, "output directory");
    cmd->add_option("--threads", c.threads, "worker threads per Eb/N0 point");
    cmd->add_option("--format", c.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

struct QuickScenario {
    std::string waveform = "cp-ofdm";
    std::string mod = "4qam";
    double tau = 0.0;
    double dft = 0.0;
    bool no_weighting = false;
};

void add_quick(CLI::App* cmd, QuickScenario& q) {
    cmd->add_option("--waveform", q.waveform, "cp-ofdm, pcc-ofdm or ufmc");
    cmd->add_option("--mod", q.mod, "constellation: 4qam, 16qam or 64qam");
    cmd->add_option("--tau", q.tau, "normalized timing offset");
    cmd->add_option("--dft", q.dft, "normalized frequency offset");
    cmd->add_flag("--no-weighting", q.no_weighting, "disable PCC receiver weighting-and-adding");
}

mcw::Scenario resolve_scenario(const CommonOpts& c, const QuickScenario& q) {
    if (!c.config_path.empty()) {
        mcw::Scenario s = mcw::scenario_from_file(c.config_path);
        return s;
    }
    mcw::Scenario s = mcw::single_user_scenario(mcw::waveform_kind_from_string(q.waveform),
                                                parse_mod(q.mod), q.tau, q.dft, {}, c.seed);
    s.waveform.pcc_weighting = !q.no_weighting;
    s.seed = c.seed;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multicarrier waveform simulation lab (CP-OFDM / PCC-OFDM / UFMC)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", mcw::tool_version);

    // ber
    CommonOpts ber_c;
    QuickScenario ber_q;
    auto* ber_cmd = app.add_subcommand("ber", "Monte-Carlo BER over an Eb/N0 grid");
    add_common(ber_cmd, ber_c);
    add_quick(ber_cmd, ber_q);

    // required
    CommonOpts req_c;
    QuickScenario req_q;
    double req_target = 1e-2;
    auto* req_cmd = app.add_subcommand("required", "Eb/N0 required to reach a target BER");
    add_common(req_cmd, req_c);
    add_quick(req_cmd, req_q);
    req_cmd->add_option("--target", req_target, "target BER");

    // sweep
    CommonOpts sw_c;
    std::string sw_family;
    std::string sw_overrides;
    auto* sw_cmd = app.add_subcommand("sweep", "run a canonical experiment family");
    add_common(sw_cmd, sw_c);
    sw_cmd->add_option("--family", sw_family,
                       "awgn_curves, time_offset_curves, freq_offset_curves, required_vs_tau, "
                       "required_vs_dft, two_user_grid, spectra, envelopes, ici_surfaces")
        ->required();
    sw_cmd->add_option("--overrides", sw_overrides, "JSON object overriding family defaults");

    // ici
    CommonOpts ici_c;
    std::string ici_kind = "time", ici_pcc = "plain";
    int ici_n = 256, ici_p = 0;
    double ici_dft = 0.0;
    auto* ici_cmd = app.add_subcommand("ici", "dump an interference matrix as CSV");
    add_common(ici_cmd, ici_c);
    ici_cmd->add_option("--kind", ici_kind, "time or freq")->check(CLI::IsMember({"time", "freq"}));
    ici_cmd->add_option("--N", ici_n, "FFT size");
    ici_cmd->add_option("--p", ici_p, "timing offset in samples (kind=time)");
    ici_cmd->add_option("--dft", ici_dft, "normalized frequency offset (kind=freq)");
    ici_cmd->add_option("--pcc", ici_pcc, "plain, noweight or weighted")
        ->check(CLI::IsMember({"plain", "noweight", "weighted"}));

    // psd
    CommonOpts psd_c;
    QuickScenario psd_q;
    int psd_symbols = 600;
    auto* psd_cmd = app.add_subcommand("psd", "Welch PSD of a random-data transmit stream");
    add_common(psd_cmd, psd_c);
    add_quick(psd_cmd, psd_q);
    psd_cmd->add_option("--symbols", psd_symbols, "number of random symbols");

    // envelope
    CommonOpts env_c;
    QuickScenario env_q;
    int env_symbols = 400;
    auto* env_cmd = app.add_subcommand("envelope", "time-domain symbol envelope");
    add_common(env_cmd, env_c);
    add_quick(env_cmd, env_q);
    env_cmd->add_option("--symbols", env_symbols, "number of random symbols to average");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ber_cmd->parsed()) {
            const mcw::Scenario s = resolve_scenario(ber_c, ber_q);
            const auto records = mcw::run_ber(s, ber_c.threads);
            std::filesystem::create_directories(ber_c.out_dir);
            const std::string file = ber_c.format == "json" ? "ber.json" : "ber.csv";
            std::ofstream out(std::filesystem::path(ber_c.out_dir) / file);
            if (ber_c.format == "json")
                mcw::write_ber_json(out, records);
            else
                mcw::write_ber_csv(out, records);
            mcw::Manifest manifest(s.seed);
            manifest.add(file, mcw::to_json(s));
            manifest.write(std::filesystem::path(ber_c.out_dir) / "manifest.json");
            for (const auto& r : records)
                std::printf("ebn0=%g dB  ber=%.3e  (%lld/%lld)%s\n", r.ebn0_db, r.ber,
                            static_cast<long long>(r.bit_errors), static_cast<long long>(r.bits),
                            r.upper_bound ? "  [upper bound]" : "");
        } else if (req_cmd->parsed()) {
            mcw::Scenario s = resolve_scenario(req_c, req_q);
            if (s.target_ber) req_target = *s.target_ber;
            mcw::RequiredResult r = mcw::required_ebn0(s, req_target, req_c.threads);
            r.offset_value = req_q.tau != 0.0 ? req_q.tau : req_q.dft;
            std::filesystem::create_directories(req_c.out_dir);
            std::ofstream out(std::filesystem::path(req_c.out_dir) / "required.csv");
            mcw::write_required_csv(out, {r});
            if (r.saturated)
                std::printf("saturated: target BER %g unreachable below %g dB\n", req_target,
                            r.required_ebn0_db);
            else
                std::printf("required Eb/N0 = %.2f dB for BER %g\n", r.required_ebn0_db, req_target);
        } else if (sw_cmd->parsed()) {
            mcw::SweepOptions opt;
            opt.out_dir = sw_c.out_dir;
            opt.seed = sw_c.seed;
            opt.threads = sw_c.threads;
            opt.format = sw_c.format;
            if (!sw_overrides.empty()) opt.overrides = nlohmann::json::parse(sw_overrides);
            mcw::run_sweep(mcw::sweep_family_from_string(sw_family), opt);
        } else if (ici_cmd->parsed()) {
            mcw::InterferenceMatrix m = ici_kind == "time" ? mcw::ici_time(ici_n, ici_p)
                                                           : mcw::ici_freq(ici_n, ici_dft);
            if (ici_pcc != "plain") m = mcw::ischi(m, ici_pcc == "weighted");
            std::filesystem::create_directories(ici_c.out_dir);
            std::ofstream out(std::filesystem::path(ici_c.out_dir) / "ici.csv");
            mcw::write_matrix_csv(out, m, ici_kind == "time" ? "p_over_n" : "dft");
        } else if (psd_cmd->parsed()) {
            const mcw::Scenario s = resolve_scenario(psd_c, psd_q);
            mcw::SeededRng rng(psd_c.seed, 0x505D);
            const mcw::PsdEstimate psd =
                mcw::psd_estimate(s.waveform, s.users[0].alloc, psd_symbols, rng);
            std::filesystem::create_directories(psd_c.out_dir);
            std::ofstream out(std::filesystem::path(psd_c.out_dir) / "psd.csv");
            mcw::write_psd_csv(out, psd);
        } else if (env_cmd->parsed()) {
            const mcw::Scenario s = resolve_scenario(env_c, env_q);
            mcw::SeededRng rng(env_c.seed, 0xE4E);
            const auto env = mcw::symbol_envelope(s.waveform, s.users[0].alloc, env_symbols, rng);
            std::filesystem::create_directories(env_c.out_dir);
            std::ofstream out(std::filesystem::path(env_c.out_dir) / "envelope.csv");
            mcw::write_real_sequence_csv(out, "envelope", env);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
