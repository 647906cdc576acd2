#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace adem {

// Philox 4x32-10 keyed counter block cipher (Salmon et al., SC 2011).
// A pure function of (counter, key), so draw k of a stream is reproducible
// regardless of scheduling or how many draws other streams have consumed.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Stream of independent N(0,1) draws identified by (seed, stream_id).
// Each Philox block yields two normals via Box-Muller; the block index is
// the draw counter, the stream id occupies the high counter words.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream_id);

    double next();
    void fill(std::span<double> out);

private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 2> stream_words_;
    std::uint64_t block_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace adem
