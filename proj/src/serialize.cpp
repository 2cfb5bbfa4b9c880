#include "cavitymod/serialize.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cavitymod {

namespace {

// shortest representation that survives a double round trip, locale-free
std::string number(double v) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s.precision(std::numeric_limits<double>::max_digits10);
    s << v;
    return s.str();
}

void put_u32(std::ostream& out, std::uint32_t v) {
    const std::array<unsigned char, 4> b = {
        static_cast<unsigned char>(v & 0xff),
        static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff),
        static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b.data()), 4);
}

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), 4);
    if (!in) throw std::runtime_error("frame record: truncated header");
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f32(std::ostream& out, float v) {
    std::uint32_t bits = 0;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

float get_f32(std::istream& in) {
    const std::uint32_t bits = get_u32(in);
    float v = 0.0f;
    std::memcpy(&v, &bits, 4);
    return v;
}

}  // namespace

void write_frames_csv(std::ostream& out, std::span<const Frame> frames) {
    out << "frame_index,bin_index,re,im\n";
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const auto& spec = frames[f].spectrum;
        for (std::size_t i = 0; i < spec.size(); ++i) {
            out << f << ',' << i << ',' << number(spec[i].real()) << ','
                << number(spec[i].imag()) << '\n';
        }
    }
}

void write_frames_binary(std::ostream& out, std::span<const Frame> frames) {
    const std::size_t n_bins = frames.empty() ? 0 : frames[0].spectrum.size();
    for (const Frame& f : frames) {
        if (f.spectrum.size() != n_bins ||
            f.sample_rate != frames[0].sample_rate) {
            throw std::invalid_argument(
                "frame record: frames disagree on the grid");
        }
    }
    put_u32(out, static_cast<std::uint32_t>(n_bins));
    put_u32(out, static_cast<std::uint32_t>(frames.size()));
    put_f32(out, frames.empty() ? 0.0f
                                : static_cast<float>(frames[0].sample_rate));
    for (const Frame& f : frames) {
        for (const cplx& v : f.spectrum) {
            put_f32(out, static_cast<float>(v.real()));
            put_f32(out, static_cast<float>(v.imag()));
        }
    }
}

std::vector<Frame> read_frames_binary(std::istream& in) {
    const std::uint32_t n_bins = get_u32(in);
    const std::uint32_t n_frames = get_u32(in);
    const float rate = get_f32(in);
    std::vector<Frame> frames(n_frames);
    for (std::uint32_t f = 0; f < n_frames; ++f) {
        frames[f].sample_rate = rate;
        frames[f].frame_index = f;
        frames[f].spectrum.resize(n_bins);
        for (std::uint32_t i = 0; i < n_bins; ++i) {
            const float re = get_f32(in);
            const float im = get_f32(in);
            frames[f].spectrum[i] = cplx(re, im);
        }
    }
    if (!in) throw std::runtime_error("frame record: truncated payload");
    return frames;
}

void write_trace_csv(std::ostream& out, const DetectorTrace& trace) {
    out << "n,distance,decision\n";
    for (std::size_t n = 0; n < trace.distances.size(); ++n) {
        out << n << ',' << number(trace.distances[n]) << ','
            << static_cast<int>(trace.decisions[n]) << '\n';
    }
}

nlohmann::json ensemble_to_json(const EigenmodeEnsemble& ens) {
    nlohmann::json doc;
    doc["band_lo"] = ens.band_lo;
    doc["band_hi"] = ens.band_hi;
    auto& modes = doc["modes"] = nlohmann::json::array();
    for (const Mode& m : ens.modes) {
        modes.push_back({{"omega", m.omega},
                         {"alpha", m.alpha},
                         {"phi", m.phi},
                         {"tau", m.tau}});
    }
    return doc;
}

EigenmodeEnsemble ensemble_from_json(const nlohmann::json& doc) {
    EigenmodeEnsemble ens;
    ens.band_lo = doc.at("band_lo").get<double>();
    ens.band_hi = doc.at("band_hi").get<double>();
    for (const auto& m : doc.at("modes")) {
        Mode mode;
        mode.omega = m.at("omega").get<double>();
        mode.alpha = m.at("alpha").get<double>();
        mode.phi = m.at("phi").get<double>();
        mode.tau = m.at("tau").get<double>();
        ens.modes.push_back(mode);
    }
    ens.validate();
    return ens;
}

}  // namespace cavitymod
