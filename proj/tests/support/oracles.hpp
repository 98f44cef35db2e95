#pragma once

// Test-only reference implementations. Nothing here calls into the normal
// form code; they are independent routes to the same answers.

#include <cstdint>
#include <random>
#include <vector>

#include <braidlen/braid.hpp>

namespace oracle {

using FreeWord = std::vector<int>; // letters +-1..+-N, freely reduced

inline void push_reduced(FreeWord& w, int x) {
    if (!w.empty() && w.back() == -x)
        w.pop_back();
    else
        w.push_back(x);
}

inline FreeWord concat(const FreeWord& a, const FreeWord& b) {
    FreeWord out = a;
    for (int x : b) push_reduced(out, x);
    return out;
}

inline FreeWord invert(const FreeWord& a) {
    FreeWord out;
    for (auto it = a.rbegin(); it != a.rend(); ++it) out.push_back(-*it);
    return out;
}

/// Artin's faithful action of B_N on the free group F_N, stored as the images
/// of x_1..x_N. Two braid words are equal in B_N iff their actions agree.
inline std::vector<FreeWord> artin_action(const braidlen::BraidWord& w) {
    const int n = w.strands;
    std::vector<FreeWord> img(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) img[j] = {j + 1};
    for (int e : w.letters) {
        const int i = std::abs(e) - 1;
        FreeWord a = img[i], b = img[i + 1];
        if (e > 0) {
            // x_i -> x_i x_{i+1} x_i^{-1}, x_{i+1} -> x_i
            img[i] = concat(concat(a, b), invert(a));
            img[i + 1] = a;
        } else {
            // x_i -> x_{i+1}, x_{i+1} -> x_{i+1}^{-1} x_i x_{i+1}
            img[i] = b;
            img[i + 1] = concat(concat(invert(b), a), b);
        }
    }
    return img;
}

inline bool equal_in_group(const braidlen::BraidWord& u, const braidlen::BraidWord& v) {
    return artin_action(u) == artin_action(v);
}

/// Permutation induced by a word, composing letter transpositions in reading order.
inline std::vector<std::uint8_t> word_permutation(const braidlen::BraidWord& w) {
    std::vector<std::uint8_t> pos(static_cast<std::size_t>(w.strands));
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = static_cast<std::uint8_t>(i);
    for (int e : w.letters) {
        const int k = std::abs(e) - 1;
        for (auto& p : pos) {
            if (p == k)
                p = static_cast<std::uint8_t>(k + 1);
            else if (p == k + 1)
                p = static_cast<std::uint8_t>(k);
        }
    }
    return pos;
}

inline braidlen::BraidWord random_word(std::mt19937_64& rng, int strands, std::size_t length) {
    std::uniform_int_distribution<int> pick(1, strands - 1);
    std::bernoulli_distribution sign(0.5);
    std::vector<int> letters;
    for (std::size_t i = 0; i < length; ++i) letters.push_back(sign(rng) ? pick(rng) : -pick(rng));
    return {strands, std::move(letters)};
}

/// Applies one randomly chosen braid relation or free insertion somewhere in
/// the word, if one applies; returns false when nothing could be applied.
inline bool apply_random_relation(std::mt19937_64& rng, braidlen::BraidWord& w) {
    auto& L = w.letters;
    std::uniform_int_distribution<int> kind(0, 2);
    for (int attempt = 0; attempt < 64; ++attempt) {
        switch (kind(rng)) {
        case 0: { // free insertion of x x^{-1}
            std::uniform_int_distribution<std::size_t> at(0, L.size());
            std::uniform_int_distribution<int> pick(1, w.strands - 1);
            int x = pick(rng) * (rng() % 2 ? 1 : -1);
            auto pos = L.begin() + static_cast<std::ptrdiff_t>(at(rng));
            pos = L.insert(pos, -x);
            L.insert(pos, x);
            return true;
        }
        case 1: { // far commutation
            if (L.size() < 2) break;
            std::uniform_int_distribution<std::size_t> at(0, L.size() - 2);
            auto i = at(rng);
            if (std::abs(std::abs(L[i]) - std::abs(L[i + 1])) >= 2) {
                std::swap(L[i], L[i + 1]);
                return true;
            }
            break;
        }
        case 2: { // braid relation, same-sign triple a b a -> b a b
            if (L.size() < 3) break;
            std::uniform_int_distribution<std::size_t> at(0, L.size() - 3);
            auto i = at(rng);
            int a = L[i], b = L[i + 1];
            if (L[i + 2] == a && ((a > 0) == (b > 0)) && std::abs(std::abs(a) - std::abs(b)) == 1) {
                L[i] = b;
                L[i + 1] = a;
                L[i + 2] = b;
                return true;
            }
            break;
        }
        }
    }
    return false;
}

} // namespace oracle

#include <algorithm>

#include <braidlen/instance.hpp>

namespace oracle {

struct Scored {
    braidlen::PeelSequence letters;
    std::int64_t score = 0;
};

/// Every peel sequence of the given length (optionally only freely reduced
/// ones), scored letter by letter from the defining words and sorted by
/// (score, letters). Independent of beam_step and gnf_multiply.
inline std::vector<Scored> enumerate_sequences(const braidlen::Instance& inst, int length, bool reduced_only) {
    using namespace braidlen;
    const int m = static_cast<int>(inst.generators.size());
    std::vector<Scored> out;
    std::vector<int> codes(static_cast<std::size_t>(length), 0);
    for (;;) {
        PeelSequence seq;
        bool ok = true;
        for (int c : codes) {
            auto l = PeelLetter::from_code(c);
            if (reduced_only && !seq.empty() && seq.back() == l.inverse()) ok = false;
            seq.push_back(l);
        }
        if (ok) {
            const BraidWord x = expand_sequence(inst.generators, seq, inst.strands);
            Scored s{seq, 0};
            for (const auto& b : inst.b) s.score += rg_length(normal_form(x.inverse().concat(b)));
            out.push_back(std::move(s));
        }
        int pos = length - 1;
        while (pos >= 0 && ++codes[static_cast<std::size_t>(pos)] == 2 * m) codes[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
    }
    std::sort(out.begin(), out.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score < b.score;
        return a.letters < b.letters;
    });
    return out;
}

} // namespace oracle
