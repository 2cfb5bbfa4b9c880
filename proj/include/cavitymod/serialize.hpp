#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "cavitymod/channel.hpp"
#include "cavitymod/eigenmode.hpp"
#include "cavitymod/modem.hpp"
#include "json.hpp"

namespace cavitymod {

/// One row per (frame, bin) under the header
/// frame_index,bin_index,re,im. Values carry full double precision so a
/// rerun reproduces the file byte for byte.
void write_frames_csv(std::ostream& out, std::span<const Frame> frames);

/// Compact binary record: little-endian u32 n_bins, u32 n_frames,
/// f32 sample_rate_hz, then per frame n_bins (re, im) f32 pairs.
/// All frames must share one grid.
void write_frames_binary(std::ostream& out, std::span<const Frame> frames);

/// Inverse of write_frames_binary. Only the grid data stored in the record
/// comes back; center frequency and occupied range take their defaults.
std::vector<Frame> read_frames_binary(std::istream& in);

/// One row per frame under the header n,distance,decision.
void write_trace_csv(std::ostream& out, const DetectorTrace& trace);

/// Ensemble as a JSON document: band_lo, band_hi, and one object per mode
/// with omega, alpha, phi, tau.
nlohmann::json ensemble_to_json(const EigenmodeEnsemble& ens);
EigenmodeEnsemble ensemble_from_json(const nlohmann::json& doc);

}  // namespace cavitymod
