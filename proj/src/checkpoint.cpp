/* Copyright 2026 The WKB Lab Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
        limitations under the License.
==============================================================================*/

#include "wkblab/checkpoint.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "wkblab/error.hpp"

namespace wkb {

namespace {

constexpr char kMagic[8] = {'W', 'K', 'B', 'L', 'A', 'B', 'C', 'K'};

class Writer {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void bytes(const char* p, std::size_t n) { buf_.append(p, n); }
    std::string& buffer() { return buf_; }

private:
    std::string buf_;
};

class Reader {
public:
    Reader(const std::string& buf, std::size_t end) : buf_(buf), end_(end) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str(std::size_t n) {
        need(n);
        std::string s = buf_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::size_t pos() const { return pos_; }

private:
    void need(std::size_t n) const {
        if (pos_ + n > end_) throw CorruptFile("checkpoint payload is truncated");
    }

    const std::string& buf_;
    std::size_t end_;
    std::size_t pos_ = 0;
};

std::uint32_t checksum(const std::string& buf, std::size_t n) {
    return static_cast<std::uint32_t>(crc32(0L, reinterpret_cast<const Bytef*>(buf.data()), static_cast<uInt>(n)));
}

}  // namespace

void save_checkpoint(const std::string& path, const MlpScore& model, const CheckpointMeta& meta) {
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.u32(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(meta.schedule_kind));
    w.f64(meta.beta);
    w.f64(meta.t_min);
    w.f64(meta.t_max);
    w.u64(meta.seed);
    w.u64(meta.epochs);
    w.u64(meta.batch_size);
    w.f64(meta.lr);
    w.u32(static_cast<std::uint32_t>(meta.dataset.size()));
    w.bytes(meta.dataset.data(), meta.dataset.size());
    const auto& widths = model.widths();
    w.u32(static_cast<std::uint32_t>(widths.size()));
    for (int width : widths) w.u32(static_cast<std::uint32_t>(width));
    const Vec& params = model.parameters();
    w.u64(static_cast<std::uint64_t>(params.size()));
    for (Eigen::Index i = 0; i < params.size(); ++i) w.f64(params[i]);
    w.u32(checksum(w.buffer(), w.buffer().size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open checkpoint for writing: " + path);
    out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
    if (!out) throw Error("failed writing checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint: " + path);
    const std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < sizeof kMagic + 8 || std::memcmp(buf.data(), kMagic, sizeof kMagic) != 0) {
        throw CorruptFile("not a checkpoint file: " + path);
    }
    const std::size_t body = buf.size() - 4;
    Reader r(buf, body);
    r.str(sizeof kMagic);
    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion) {
        throw VersionMismatch("checkpoint version " + std::to_string(version) + " (expected " +
                              std::to_string(kCheckpointVersion) + ")");
    }

    CheckpointMeta meta;
    const std::uint32_t kind = r.u32();
    if (kind > static_cast<std::uint32_t>(ScheduleKind::ZeroDrift)) throw CorruptFile("unknown schedule tag");
    meta.schedule_kind = static_cast<ScheduleKind>(kind);
    meta.beta = r.f64();
    meta.t_min = r.f64();
    meta.t_max = r.f64();
    meta.seed = r.u64();
    meta.epochs = r.u64();
    meta.batch_size = r.u64();
    meta.lr = r.f64();
    meta.dataset = r.str(r.u32());
    const std::uint32_t n_widths = r.u32();
    if (n_widths != MlpScore::kLayers + 1) throw CorruptFile("unexpected number of layer widths");
    std::array<int, MlpScore::kLayers + 1> widths{};
    for (auto& width : widths) width = static_cast<int>(r.u32());
    if (widths[0] != widths[4] + 1 || widths[1] != widths[2] || widths[2] != widths[3] || widths[1] < 1) {
        throw CorruptFile("inconsistent layer widths");
    }
    const std::uint64_t n_params = r.u64();
    const std::uint64_t expected = static_cast<std::uint64_t>(
        MlpScore::zeros(widths[4], widths[1]).num_parameters());
    if (n_params != expected) throw CorruptFile("parameter count does not match the widths");
    Vec params(static_cast<Eigen::Index>(n_params));
    for (Eigen::Index i = 0; i < params.size(); ++i) params[i] = r.f64();
    if (r.pos() != body) throw CorruptFile("trailing bytes in checkpoint");

    std::uint32_t stored = 0;
    for (int i = 0; i < 4; ++i) stored |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf[body + i])) << (8 * i);
    if (stored != checksum(buf, body)) throw CorruptFile("checkpoint checksum mismatch");

    return {MlpScore::from_parameters(widths[4], widths[1], meta.seed, params), meta};
}

Checkpoint load_checkpoint(const std::string& path, int expected_dim, int expected_hidden) {
    Checkpoint ck = load_checkpoint(path);
    if (ck.model.dim() != expected_dim || ck.model.hidden() != expected_hidden) {
        throw ArchitectureMismatch("checkpoint widths (dim " + std::to_string(ck.model.dim()) + ", hidden " +
                                   std::to_string(ck.model.hidden()) + ") differ from the requested architecture");
    }
    return ck;
}

}  // namespace wkb
