#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cavitymod/config.hpp"
#include "json.hpp"

namespace cavitymod {

/// One row of the modulation comparison table.
struct BerReport {
    std::string label;
    std::size_t bits_sent = 0;
    std::size_t bit_errors = 0;
    double ber = 0.0;
    std::size_t erasures = 0;
    double bit_rate_bits_per_s = 0.0;  ///< bits / (n_frames * frame duration)
};

/// Writes content to path atomically (temp file in the same directory,
/// then rename), creating parent directories as needed.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Sweeps flipped-unit counts and measures, across seeds, the variance of
/// the normalized received PSD change a switch of that size causes. Writes
/// psd_variance.csv (units_flipped, psd_variance). Returns metrics:
/// per-point mean and squared standard error, and the units/variance
/// Pearson correlation.
nlohmann::json exp_psd_variance(const ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir);

/// Renders the received PSD under two random codebooks from the flat
/// source, plus a same-state rerun as the noise baseline. Writes
/// two_codebooks.csv (bin_frequency_hz, psd_a, psd_b). Returns the
/// normalized L2 distances (pair and baseline).
nlohmann::json exp_two_codebooks(const ExperimentConfig& cfg,
                                 const std::filesystem::path& out_dir);

/// Runs (i) switch-only, (ii) drift-only, (iii) drift+switch for n_frames
/// each; writes frames_<scenario>.csv/.bin and trace_<scenario>.csv.
/// Returns per-scenario pulse indices and thresholds.
nlohmann::json exp_three_scenarios(const ExperimentConfig& cfg,
                                   const std::filesystem::path& out_dir);

/// PPM chain under the three drift presets plus the OFDM baseline on the
/// identical walking schedule and an every-frame-switch OFDM run. Writes
/// ber_table.csv. Returns the table rows.
nlohmann::json exp_ber_table(const ExperimentConfig& cfg,
                             const std::filesystem::path& out_dir);

/// Byte stream -> PPM schedule -> cavity -> detector -> decoded bytes.
/// Reads cfg.input_file if set, otherwise generates payload_bytes random
/// bytes (written as sent.bin). Writes received.bin and trace.csv. Returns
/// the BerReport fields plus byte_identical.
nlohmann::json exp_file_roundtrip(const ExperimentConfig& cfg,
                                  const std::filesystem::path& out_dir);

/// Dispatches on name ("psd-variance", "two-codebooks", "three-scenarios",
/// "ber-table", "roundtrip"), validates the config, runs the experiment,
/// and writes summary.json (resolved config + metrics + output list) into
/// out_dir. Returns the summary.
nlohmann::json run_experiment(const std::string& name,
                              const ExperimentConfig& cfg,
                              const std::filesystem::path& out_dir);

}  // namespace cavitymod
