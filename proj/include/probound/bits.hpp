#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace probound {

// Dense 0/1 vector indexed by atoms, packed 64 per word. Used for truth
// tables and clause-matrix columns.
class AtomBits {
public:
    AtomBits() = default;
    explicit AtomBits(std::uint64_t size, bool fill = false)
        : size_(size), words_((size + 63) / 64, fill ? ~0ull : 0ull) {
        trim();
    }

    std::uint64_t size() const { return size_; }
    std::size_t word_count() const { return words_.size(); }
    std::uint64_t word(std::size_t i) const { return words_[i]; }
    std::uint64_t* data() { return words_.data(); }
    const std::uint64_t* data() const { return words_.data(); }

    bool get(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(std::uint64_t i, bool v) {
        std::uint64_t mask = 1ull << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    std::uint64_t count() const {
        std::uint64_t c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    AtomBits& operator&=(const AtomBits& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    AtomBits& operator|=(const AtomBits& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    void flip() {
        for (auto& w : words_) w = ~w;
        trim();
    }

    friend bool operator==(const AtomBits& a, const AtomBits& b) {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }

    void trim() {
        if (size_ & 63) words_.back() &= (1ull << (size_ & 63)) - 1;
    }

private:
    std::uint64_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace probound
