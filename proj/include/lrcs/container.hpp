#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lrcs/numerics.hpp"
#include "lrcs/operators.hpp"
#include "lrcs/sampling.hpp"

namespace lrcs {

// LRCS1 container layout (all integers little-endian u32):
//
//   "LRCS1" | kind | n1 | n2 | q | mc | dtype | [m_k × q, k-space only] | payload
//
// Payload is frame-major. Complex data (dtype 0) is interleaved re/im f64,
// pixels column-major within a frame; k-space frames hold m_k·mc values,
// coil-major. Masks (dtype 1) store one byte per cell, column-major. Coil-map
// files store mc maps and write q = 1.

enum class ContainerKind : std::uint32_t { ImageSequence = 0, KSpace = 1, Masks = 2, CoilMaps = 3 };
enum class ContainerDtype : std::uint32_t { ComplexF64 = 0, U8 = 1 };

inline constexpr char kContainerMagic[5] = {'L', 'R', 'C', 'S', '1'};

struct ContainerHeader {
    ContainerKind kind = ContainerKind::ImageSequence;
    std::uint32_t n1 = 0;
    std::uint32_t n2 = 0;
    std::uint32_t q = 0;
    std::uint32_t mc = 1;
    ContainerDtype dtype = ContainerDtype::ComplexF64;
    std::vector<std::uint32_t> m_k;  // k-space only

    std::uint64_t header_bytes() const;
    std::uint64_t frame_count() const;           // q, or mc for coil maps
    std::uint64_t frame_bytes(std::uint64_t frame) const;
    std::uint64_t payload_bytes() const;
    void validate() const;
};

/// Image sequence Z: n1×n2 frames stored as columns of an n×q matrix.
struct ImageSequence {
    Index n1 = 0;
    Index n2 = 0;
    ComplexMatrix frames;
};

struct KSpaceData {
    Index n1 = 0;
    Index n2 = 0;
    Index mc = 1;
    MeasurementSet measurements;
};

/// Sequential reader; frames are decoded one at a time in file order.
class ContainerReader {
public:
    explicit ContainerReader(const std::filesystem::path& path);

    const ContainerHeader& header() const noexcept { return header_; }
    bool has_next() const noexcept { return next_ < header_.frame_count(); }

    /// Next complex frame (image, k-space or coil map kinds).
    ComplexVector read_complex_frame();
    /// Next mask frame.
    FrameMask read_mask_frame();

private:
    std::vector<unsigned char> read_frame_bytes();

    std::ifstream in_;
    ContainerHeader header_;
    std::uint64_t offset_ = 0;
    std::uint64_t next_ = 0;
};

/// Sequential writer. Data goes to "<path>.tmp" and is renamed onto `path`
/// by `close()` once every frame declared in the header has been written.
class ContainerWriter {
public:
    ContainerWriter(std::filesystem::path path, ContainerHeader header);
    ~ContainerWriter();
    ContainerWriter(const ContainerWriter&) = delete;
    ContainerWriter& operator=(const ContainerWriter&) = delete;

    void write_complex_frame(const ComplexVector& frame);
    void write_mask_frame(const FrameMask& mask);
    void close();

private:
    void write_bytes(const std::vector<unsigned char>& bytes);

    std::filesystem::path path_;
    std::filesystem::path tmp_;
    ContainerHeader header_;
    std::ofstream out_;
    std::uint64_t next_ = 0;
    bool closed_ = false;
};

void write_image_sequence(const std::filesystem::path& path, const ImageSequence& z);
ImageSequence read_image_sequence(const std::filesystem::path& path);

void write_kspace(const std::filesystem::path& path, const KSpaceData& data);
KSpaceData read_kspace(const std::filesystem::path& path);

void write_masks(const std::filesystem::path& path, const std::vector<FrameMask>& masks);
std::vector<FrameMask> read_masks(const std::filesystem::path& path);

void write_coil_maps(const std::filesystem::path& path, const CoilMaps& coils);
CoilMaps read_coil_maps(const std::filesystem::path& path);

/// Writes `text` to `path` through a temporary file and rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace lrcs
