#pragma once

// Fixed-width Boolean state vector, bit-packed 64 bits per word.
//
// Packing convention: bit j lives in word j/64 at position 63 - j%64, i.e.
// most significant first. Word-wise integer comparison is then exactly the
// lexicographic order on bits with bit 0 most significant, which is the
// ordering used to canonicalize attractor cycles. Unused low bits of the
// last word are kept at zero.

#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rbn/rng.hpp"

namespace rbn {

class NetworkState {
  public:
    NetworkState() = default;

    explicit NetworkState(std::size_t n) : nbits_(n), words_(word_count(n), 0) {}

    /// Parse from a 0/1 string, character j giving bit j.
    static NetworkState from_string(std::string_view bits) {
        NetworkState s(bits.size());
        for (std::size_t j = 0; j < bits.size(); ++j) {
            if (bits[j] == '1')
                s.set(j, true);
            else if (bits[j] != '0')
                throw std::invalid_argument(
                    "NetworkState::from_string: expected only '0' or '1'");
        }
        return s;
    }

    std::size_t size() const { return nbits_; }

    bool get(std::size_t j) const {
        return (words_[j >> 6] >> (63 - (j & 63))) & 1u;
    }

    void set(std::size_t j, bool v) {
        const std::uint64_t mask = 1ull << (63 - (j & 63));
        if (v)
            words_[j >> 6] |= mask;
        else
            words_[j >> 6] &= ~mask;
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (std::uint64_t w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    std::string to_string() const {
        std::string out(nbits_, '0');
        for (std::size_t j = 0; j < nbits_; ++j)
            if (get(j))
                out[j] = '1';
        return out;
    }

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    friend bool operator==(const NetworkState&, const NetworkState&) = default;

    /// Lexicographic with bit 0 most significant; defined for equal sizes.
    friend std::strong_ordering operator<=>(const NetworkState& a,
                                            const NetworkState& b) {
        if (a.nbits_ != b.nbits_)
            throw std::invalid_argument("NetworkState: ordering needs equal sizes");
        for (std::size_t w = 0; w < a.words_.size(); ++w)
            if (a.words_[w] != b.words_[w])
                return a.words_[w] <=> b.words_[w];
        return std::strong_ordering::equal;
    }

    static std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

    /// Mask keeping the used (high) bits of the last word.
    static std::uint64_t tail_mask(std::size_t n) {
        const std::size_t rem = n & 63;
        return rem == 0 ? ~0ull : ~0ull << (64 - rem);
    }

  private:
    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Number of differing bit positions; sizes must match.
inline std::size_t hamming(const NetworkState& a, const NetworkState& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming: states have different lengths");
    std::size_t d = 0;
    const auto wa = a.words(), wb = b.words();
    for (std::size_t w = 0; w < wa.size(); ++w)
        d += static_cast<std::size_t>(std::popcount(wa[w] ^ wb[w]));
    return d;
}

/// Uniform random state on {0,1}^n. Draw order: one raw 64-bit word per
/// state word, word 0 first, then the tail is masked.
inline NetworkState random_state(std::size_t n, Rng& rng) {
    NetworkState s(n);
    auto words = s.words();
    for (auto& w : words)
        w = rng.next_u64();
    if (!words.empty())
        words.back() &= NetworkState::tail_mask(n);
    return s;
}

struct StateHash {
    std::size_t operator()(const NetworkState& s) const {
        std::uint64_t h = 0x243f6a8885a308d3ull;
        for (std::uint64_t w : s.words())
            h = mix64(h ^ w);
        return static_cast<std::size_t>(h);
    }
};

}  // namespace rbn
