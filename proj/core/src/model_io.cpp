#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "pam/errors.hpp"
#include "pam/model.hpp"

namespace pam {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'A', 'M', 'W'};
constexpr std::uint32_t kFormatVersion = 1;

// CRC-32 (IEEE, reflected, poly 0xEDB88320).
std::uint32_t crc32(const unsigned char* data, std::size_t len) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int k = 0; k < 8; ++k) {
                c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            }
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i) {
        crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    }
    return crc ^ 0xFFFFFFFFu;
}

class Writer {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
        }
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            bytes_.push_back(static_cast<unsigned char>(v >> (8 * i)));
        }
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void raw(const char* data, std::size_t len) {
        bytes_.insert(bytes_.end(), data, data + len);
    }

    std::vector<unsigned char>& bytes() { return bytes_; }

private:
    std::vector<unsigned char> bytes_;
};

class Reader {
public:
    Reader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
        }
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(bytes_[pos_ + static_cast<std::size_t>(i)]) << (8 * i);
        }
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    float f32() { return std::bit_cast<float>(u32()); }

private:
    void need(std::size_t n) {
        if (pos_ + n > bytes_.size()) {
            throw FormatError("weight file truncated", pos_);
        }
    }

    const std::vector<unsigned char>& bytes_;
    std::size_t pos_ = 0;
};

} // namespace

void Model::save(const std::string& path) const {
    Writer w;
    w.raw(kMagic.data(), kMagic.size());
    w.u32(kFormatVersion);
    w.u32(static_cast<std::uint32_t>(params_.n_c));
    w.u32(static_cast<std::uint32_t>(params_.n_k));
    w.u32(static_cast<std::uint32_t>(params_.w));
    w.f64(params_.theta_a);
    w.f64(params_.theta_b);
    w.f64(params_.eta_a_plus);
    w.f64(params_.eta_a_minus);
    w.f64(params_.eta_b_plus);
    w.f64(params_.eta_b_minus);
    w.u64(rng_.state());
    for (std::int32_t row : start_context_) {
        w.u32(static_cast<std::uint32_t>(row));
    }
    for (float v : a_) {
        w.f32(v);
    }
    for (float v : b_) {
        w.f32(v);
    }
    w.u32(crc32(w.bytes().data(), w.bytes().size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out.write(reinterpret_cast<const char*>(w.bytes().data()),
              static_cast<std::streamsize>(w.bytes().size()));
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

Model Model::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());

    Reader r(bytes);
    if (bytes.size() < 8) {
        throw FormatError("weight file truncated", bytes.size());
    }
    if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
        throw FormatError("bad magic", 0);
    }
    r.u32(); // magic, already checked
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion) {
        throw FormatError("unsupported version " + std::to_string(version), 4);
    }
    const std::uint32_t n_c = r.u32();
    const std::uint32_t n_k = r.u32();
    const std::uint32_t w = r.u32();
    if (n_c < 1 || n_k < 1 || w < 1 || w > n_c) {
        throw FormatError("invalid dimensions", 8);
    }

    const std::size_t nl = static_cast<std::size_t>(n_c) * n_k;
    const std::size_t expected =
        4 + 4 + 12 + 6 * 8 + 8 + 4 * static_cast<std::size_t>(n_c) + 4 * nl * nl +
        4 * static_cast<std::size_t>(n_c) * n_c + 4;
    if (bytes.size() != expected) {
        throw FormatError("weight file size " + std::to_string(bytes.size()) + ", expected " +
                              std::to_string(expected),
                          bytes.size());
    }
    const std::uint32_t stored_crc = static_cast<std::uint32_t>(bytes[expected - 4]) |
                                     static_cast<std::uint32_t>(bytes[expected - 3]) << 8 |
                                     static_cast<std::uint32_t>(bytes[expected - 2]) << 16 |
                                     static_cast<std::uint32_t>(bytes[expected - 1]) << 24;
    if (crc32(bytes.data(), expected - 4) != stored_crc) {
        throw FormatError("payload CRC mismatch", expected - 4);
    }

    Params params = Params::defaults(static_cast<int>(n_c), static_cast<int>(n_k),
                                     static_cast<int>(w));
    params.theta_a = r.f64();
    params.theta_b = r.f64();
    params.eta_a_plus = r.f64();
    params.eta_a_minus = r.f64();
    params.eta_b_plus = r.f64();
    params.eta_b_minus = r.f64();
    const std::uint64_t rng_state = r.u64();

    Model model;
    model.params_ = params;
    model.params_.validate();
    model.rng_.set_state(rng_state);
    model.start_context_.resize(n_c);
    model.a_.resize(nl * nl);
    model.b_.resize(static_cast<std::size_t>(n_c) * n_c);
    for (std::size_t i = 0; i < n_c; ++i) {
        const std::size_t at = r.offset();
        const std::uint32_t row = r.u32();
        if (row >= n_k) {
            throw FormatError("start-context row " + std::to_string(row) + " >= n_k", at);
        }
        model.start_context_[i] = static_cast<std::int32_t>(row);
    }
    for (auto& v : model.a_) {
        v = r.f32();
    }
    for (auto& v : model.b_) {
        v = r.f32();
    }
    return model;
}

} // namespace pam
