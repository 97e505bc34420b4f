#include "lrcs/container.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <system_error>

#include "lrcs/error.hpp"

namespace lrcs {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMagicBytes = sizeof(kContainerMagic);
constexpr std::uint64_t kFixedHeaderBytes = kMagicBytes + 6 * 4;
// Guards against absurd headers before any allocation happens.
constexpr std::uint64_t kMaxDimension = 1u << 20;

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>((v >> (8 * b)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f64(unsigned char* out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out[b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xffu);
}

double get_f64(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return std::bit_cast<double>(bits);
}

std::uint32_t checked_u32(Index v, const char* what) {
    if (v < 0 || static_cast<std::uint64_t>(v) > kMaxDimension)
        throw DataError(std::string("container: ") + what + " out of range: " + std::to_string(v));
    return static_cast<std::uint32_t>(v);
}

std::vector<unsigned char> encode_header(const ContainerHeader& h) {
    std::vector<unsigned char> out(kContainerMagic, kContainerMagic + kMagicBytes);
    put_u32(out, static_cast<std::uint32_t>(h.kind));
    put_u32(out, h.n1);
    put_u32(out, h.n2);
    put_u32(out, h.q);
    put_u32(out, h.mc);
    put_u32(out, static_cast<std::uint32_t>(h.dtype));
    for (std::uint32_t m : h.m_k) put_u32(out, m);
    return out;
}

fs::path tmp_path(const fs::path& path) {
    fs::path tmp = path;
    tmp += ".tmp";
    return tmp;
}

}  // namespace

std::uint64_t ContainerHeader::header_bytes() const { return kFixedHeaderBytes + 4 * m_k.size(); }

std::uint64_t ContainerHeader::frame_count() const { return kind == ContainerKind::CoilMaps ? mc : q; }

std::uint64_t ContainerHeader::frame_bytes(std::uint64_t frame) const {
    const std::uint64_t cells = static_cast<std::uint64_t>(n1) * n2;
    switch (kind) {
        case ContainerKind::ImageSequence:
        case ContainerKind::CoilMaps: return 16 * cells;
        case ContainerKind::KSpace: return 16 * static_cast<std::uint64_t>(m_k.at(frame)) * mc;
        case ContainerKind::Masks: return cells;
    }
    return 0;
}

std::uint64_t ContainerHeader::payload_bytes() const {
    std::uint64_t total = 0;
    for (std::uint64_t k = 0; k < frame_count(); ++k) total += frame_bytes(k);
    return total;
}

void ContainerHeader::validate() const {
    const auto kind_raw = static_cast<std::uint32_t>(kind);
    if (kind_raw > 3) throw ContainerError("unknown container kind " + std::to_string(kind_raw), kMagicBytes);
    if (n1 == 0 || n2 == 0 || n1 > kMaxDimension || n2 > kMaxDimension)
        throw ContainerError("invalid frame size " + std::to_string(n1) + "x" + std::to_string(n2), kMagicBytes + 4);
    if (q == 0 || q > kMaxDimension) throw ContainerError("invalid frame count " + std::to_string(q), kMagicBytes + 12);
    if (mc == 0 || mc > 1024) throw ContainerError("invalid coil count " + std::to_string(mc), kMagicBytes + 16);
    if (kind == ContainerKind::CoilMaps && q != 1)
        throw ContainerError("coil-map container must declare q = 1", kMagicBytes + 12);
    const ContainerDtype expected = kind == ContainerKind::Masks ? ContainerDtype::U8 : ContainerDtype::ComplexF64;
    if (dtype != expected)
        throw ContainerError("dtype " + std::to_string(static_cast<std::uint32_t>(dtype)) +
                                 " does not match container kind " + std::to_string(kind_raw),
                             kMagicBytes + 20);
    const std::size_t table = kind == ContainerKind::KSpace ? q : 0;
    if (m_k.size() != table)
        throw ContainerError("m_k table has " + std::to_string(m_k.size()) + " entries, expected " +
                                 std::to_string(table),
                             kFixedHeaderBytes);
    const std::uint64_t cells = static_cast<std::uint64_t>(n1) * n2;
    for (std::size_t k = 0; k < m_k.size(); ++k)
        if (m_k[k] == 0 || m_k[k] > cells)
            throw ContainerError("m_k[" + std::to_string(k) + "] = " + std::to_string(m_k[k]) + " is outside [1, n1*n2]",
                                 kFixedHeaderBytes + 4 * k);
}

// ---------------------------------------------------------------- reader

ContainerReader::ContainerReader(const fs::path& path) : in_(path, std::ios::binary) {
    if (!in_) throw DataError("cannot open container '" + path.string() + "'");
    std::error_code ec;
    const std::uint64_t file_size = fs::file_size(path, ec);
    if (ec) throw DataError("cannot stat container '" + path.string() + "': " + ec.message());

    std::array<unsigned char, kFixedHeaderBytes> fixed{};
    in_.read(reinterpret_cast<char*>(fixed.data()), static_cast<std::streamsize>(fixed.size()));
    const auto got = static_cast<std::uint64_t>(in_.gcount());
    if (got < kMagicBytes || std::memcmp(fixed.data(), kContainerMagic, kMagicBytes) != 0) {
        std::uint64_t at = 0;
        while (at < got && at < kMagicBytes && fixed[at] == static_cast<unsigned char>(kContainerMagic[at])) ++at;
        throw ContainerError("bad magic, expected \"LRCS1\"", at);
    }
    if (got < kFixedHeaderBytes) throw ContainerError("truncated header", got);

    header_.kind = static_cast<ContainerKind>(get_u32(&fixed[kMagicBytes]));
    header_.n1 = get_u32(&fixed[kMagicBytes + 4]);
    header_.n2 = get_u32(&fixed[kMagicBytes + 8]);
    header_.q = get_u32(&fixed[kMagicBytes + 12]);
    header_.mc = get_u32(&fixed[kMagicBytes + 16]);
    header_.dtype = static_cast<ContainerDtype>(get_u32(&fixed[kMagicBytes + 20]));
    offset_ = kFixedHeaderBytes;

    if (header_.kind == ContainerKind::KSpace && header_.q <= kMaxDimension) {
        std::vector<unsigned char> table(4 * static_cast<std::size_t>(header_.q));
        in_.read(reinterpret_cast<char*>(table.data()), static_cast<std::streamsize>(table.size()));
        const auto read = static_cast<std::uint64_t>(in_.gcount());
        if (read < table.size()) throw ContainerError("truncated m_k table", offset_ + read);
        header_.m_k.resize(header_.q);
        for (std::size_t k = 0; k < header_.q; ++k) header_.m_k[k] = get_u32(&table[4 * k]);
        offset_ += table.size();
    }
    header_.validate();

    const std::uint64_t expected = header_.header_bytes() + header_.payload_bytes();
    if (file_size < expected)
        throw ContainerError("payload truncated: file has " + std::to_string(file_size) + " bytes, header implies " +
                                 std::to_string(expected),
                             file_size);
    if (file_size > expected)
        throw ContainerError("trailing bytes after payload: file has " + std::to_string(file_size) +
                                 " bytes, header implies " + std::to_string(expected),
                             expected);
}

std::vector<unsigned char> ContainerReader::read_frame_bytes() {
    if (!has_next()) throw ContainerError("read past the last frame", offset_);
    std::vector<unsigned char> bytes(header_.frame_bytes(next_));
    in_.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    const auto got = static_cast<std::uint64_t>(in_.gcount());
    if (got < bytes.size()) throw ContainerError("payload truncated", offset_ + got);
    ++next_;
    return bytes;
}

ComplexVector ContainerReader::read_complex_frame() {
    if (header_.dtype != ContainerDtype::ComplexF64)
        throw ContainerError("container does not hold complex frames", kMagicBytes + 20);
    const std::uint64_t start = offset_;
    const auto bytes = read_frame_bytes();
    offset_ += bytes.size();
    ComplexVector v(static_cast<Index>(bytes.size() / 16));
    for (Index i = 0; i < v.size(); ++i) {
        const unsigned char* p = &bytes[static_cast<std::size_t>(16 * i)];
        v(i) = Complex(get_f64(p), get_f64(p + 8));
        if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag()))
            throw ContainerError("non-finite value", start + 16 * static_cast<std::uint64_t>(i));
    }
    return v;
}

FrameMask ContainerReader::read_mask_frame() {
    if (header_.kind != ContainerKind::Masks) throw ContainerError("container does not hold masks", kMagicBytes);
    const std::uint64_t start = offset_;
    auto bytes = read_frame_bytes();
    offset_ += bytes.size();
    std::vector<std::uint8_t> cells(bytes.begin(), bytes.end());
    bool any = false;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] > 1) throw ContainerError("mask byte is not 0 or 1", start + i);
        any = any || cells[i] != 0;
    }
    if (!any) throw ContainerError("mask frame " + std::to_string(next_ - 1) + " has no sampled cells", start);
    return FrameMask(header_.n1, header_.n2, std::move(cells));
}

// ---------------------------------------------------------------- writer

ContainerWriter::ContainerWriter(fs::path path, ContainerHeader header)
    : path_(std::move(path)), tmp_(tmp_path(path_)), header_(std::move(header)) {
    try {
        header_.validate();
    } catch (const ContainerError& e) {
        throw DataError(std::string("refusing to write invalid container header: ") + e.what());
    }
    if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw DataError("cannot open '" + tmp_.string() + "' for writing");
    write_bytes(encode_header(header_));
}

ContainerWriter::~ContainerWriter() {
    if (!closed_) {
        out_.close();
        std::error_code ec;
        fs::remove(tmp_, ec);
    }
}

void ContainerWriter::write_bytes(const std::vector<unsigned char>& bytes) {
    out_.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out_) throw DataError("write to '" + tmp_.string() + "' failed");
}

void ContainerWriter::write_complex_frame(const ComplexVector& frame) {
    if (header_.dtype != ContainerDtype::ComplexF64) throw DataError("container: complex frame written to a mask file");
    if (next_ >= header_.frame_count()) throw DataError("container: more frames than declared in the header");
    const std::uint64_t expected = header_.frame_bytes(next_) / 16;
    if (static_cast<std::uint64_t>(frame.size()) != expected)
        throw DataError("container: frame " + std::to_string(next_) + " has " + std::to_string(frame.size()) +
                        " values, header implies " + std::to_string(expected));
    std::vector<unsigned char> bytes(16 * expected);
    for (Index i = 0; i < frame.size(); ++i) {
        put_f64(&bytes[static_cast<std::size_t>(16 * i)], frame(i).real());
        put_f64(&bytes[static_cast<std::size_t>(16 * i + 8)], frame(i).imag());
    }
    write_bytes(bytes);
    ++next_;
}

void ContainerWriter::write_mask_frame(const FrameMask& mask) {
    if (header_.kind != ContainerKind::Masks) throw DataError("container: mask written to a non-mask file");
    if (next_ >= header_.frame_count()) throw DataError("container: more frames than declared in the header");
    if (mask.n1() != header_.n1 || mask.n2() != header_.n2) throw DataError("container: mask size mismatch");
    write_bytes(std::vector<unsigned char>(mask.cells().begin(), mask.cells().end()));
    ++next_;
}

void ContainerWriter::close() {
    if (closed_) return;
    if (next_ != header_.frame_count())
        throw DataError("container: " + std::to_string(next_) + " of " + std::to_string(header_.frame_count()) +
                        " frames written");
    out_.flush();
    out_.close();
    if (!out_) throw DataError("closing '" + tmp_.string() + "' failed");
    fs::rename(tmp_, path_);
    closed_ = true;
}

// ---------------------------------------------------------------- whole-file helpers

void write_image_sequence(const fs::path& path, const ImageSequence& z) {
    if (z.frames.rows() != z.n1 * z.n2) throw DataError("image sequence: rows do not equal n1*n2");
    ContainerHeader h;
    h.kind = ContainerKind::ImageSequence;
    h.n1 = checked_u32(z.n1, "n1");
    h.n2 = checked_u32(z.n2, "n2");
    h.q = checked_u32(z.frames.cols(), "q");
    ContainerWriter w(path, h);
    for (Index k = 0; k < z.frames.cols(); ++k) w.write_complex_frame(z.frames.col(k));
    w.close();
}

ImageSequence read_image_sequence(const fs::path& path) {
    ContainerReader r(path);
    const auto& h = r.header();
    if (h.kind != ContainerKind::ImageSequence)
        throw ContainerError("expected an image-sequence container, found kind " +
                                 std::to_string(static_cast<std::uint32_t>(h.kind)),
                             kMagicBytes);
    ImageSequence z{h.n1, h.n2, ComplexMatrix(static_cast<Index>(h.n1) * h.n2, h.q)};
    for (Index k = 0; k < z.frames.cols(); ++k) z.frames.col(k) = r.read_complex_frame();
    return z;
}

void write_kspace(const fs::path& path, const KSpaceData& data) {
    ContainerHeader h;
    h.kind = ContainerKind::KSpace;
    h.n1 = checked_u32(data.n1, "n1");
    h.n2 = checked_u32(data.n2, "n2");
    h.q = checked_u32(data.measurements.size(), "q");
    h.mc = checked_u32(data.mc, "mc");
    for (const auto& y : data.measurements.frames) {
        if (data.mc < 1 || y.size() % data.mc != 0)
            throw DataError("k-space frame length " + std::to_string(y.size()) + " is not a multiple of mc");
        h.m_k.push_back(checked_u32(y.size() / data.mc, "m_k"));
    }
    ContainerWriter w(path, h);
    for (const auto& y : data.measurements.frames) w.write_complex_frame(y);
    w.close();
}

KSpaceData read_kspace(const fs::path& path) {
    ContainerReader r(path);
    const auto& h = r.header();
    if (h.kind != ContainerKind::KSpace)
        throw ContainerError("expected a k-space container, found kind " +
                                 std::to_string(static_cast<std::uint32_t>(h.kind)),
                             kMagicBytes);
    KSpaceData d{h.n1, h.n2, h.mc, {}};
    while (r.has_next()) d.measurements.frames.push_back(r.read_complex_frame());
    return d;
}

void write_masks(const fs::path& path, const std::vector<FrameMask>& masks) {
    if (masks.empty()) throw DataError("write_masks: no masks");
    ContainerHeader h;
    h.kind = ContainerKind::Masks;
    h.dtype = ContainerDtype::U8;
    h.n1 = checked_u32(masks.front().n1(), "n1");
    h.n2 = checked_u32(masks.front().n2(), "n2");
    h.q = checked_u32(static_cast<Index>(masks.size()), "q");
    ContainerWriter w(path, h);
    for (const auto& m : masks) w.write_mask_frame(m);
    w.close();
}

std::vector<FrameMask> read_masks(const fs::path& path) {
    ContainerReader r(path);
    std::vector<FrameMask> masks;
    while (r.has_next()) masks.push_back(r.read_mask_frame());
    return masks;
}

void write_coil_maps(const fs::path& path, const CoilMaps& coils) {
    if (coils.maps.empty()) throw DataError("write_coil_maps: no coils");
    ContainerHeader h;
    h.kind = ContainerKind::CoilMaps;
    h.n1 = checked_u32(coils.maps.front().rows(), "n1");
    h.n2 = checked_u32(coils.maps.front().cols(), "n2");
    h.q = 1;
    h.mc = checked_u32(coils.coils(), "mc");
    ContainerWriter w(path, h);
    for (const auto& d : coils.maps) {
        if (d.rows() != coils.maps.front().rows() || d.cols() != coils.maps.front().cols())
            throw DataError("write_coil_maps: coil maps differ in size");
        w.write_complex_frame(Eigen::Map<const ComplexVector>(d.data(), d.size()));
    }
    w.close();
}

CoilMaps read_coil_maps(const fs::path& path) {
    ContainerReader r(path);
    const auto& h = r.header();
    if (h.kind != ContainerKind::CoilMaps)
        throw ContainerError("expected a coil-map container, found kind " +
                                 std::to_string(static_cast<std::uint32_t>(h.kind)),
                             kMagicBytes);
    CoilMaps coils;
    while (r.has_next()) {
        const ComplexVector v = r.read_complex_frame();
        coils.maps.push_back(Eigen::Map<const ComplexMatrix>(v.data(), h.n1, h.n2));
    }
    return coils;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = tmp_path(path);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open '" + tmp.string() + "' for writing");
        out << text;
        if (!out) throw DataError("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, path);
}

}  // namespace lrcs
