#pragma once

/**
 * @file braid.hpp
 * @brief Exact arithmetic in the braid group B_N.
 *
 * Elements are kept in left canonical (Garside) form
 *
 *     Delta^{-r} p_1 p_2 ... p_q,   r >= 0 minimal,
 *
 * where every p_i is a permutation braid stored as a permutation table and
 * consecutive factors are left-weighted. Positive powers of Delta appear as
 * leading factors equal to Delta (only when r == 0).
 *
 * Conventions. Strands are numbered by position 0..N-1 internally. A
 * permutation braid's table maps the starting position of a strand to its
 * final position; letters act in reading order, so the table of a word is
 * the composition of the letters' transpositions applied left to right.
 * Text formats use 1-based indices.
 */

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdlib>
#include <cstdint>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace braidlen {

struct braid_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int max_strands = 255;

inline void check_strands(int strands) {
    if (strands < 2 || strands > max_strands)
        throw braid_error("strand count must be in [2, 255], got " + std::to_string(strands));
}

// ---------------------------------------------------------------------------
// Words
// ---------------------------------------------------------------------------

/// Word in the Artin generators. Letter +i is sigma_i, -i is sigma_i^{-1}.
struct BraidWord {
    int strands = 2;
    std::vector<int> letters;

    BraidWord() = default;
    BraidWord(int n, std::vector<int> ls) : strands(n), letters(std::move(ls)) {
        check_strands(n);
        for (int e : letters)
            if (e == 0 || e >= n || -e >= n)
                throw braid_error("letter " + std::to_string(e) + " out of range for B_" + std::to_string(n));
    }

    bool operator==(const BraidWord&) const = default;

    [[nodiscard]] BraidWord inverse() const {
        std::vector<int> out(letters.rbegin(), letters.rend());
        for (int& e : out) e = -e;
        return {strands, std::move(out)};
    }

    [[nodiscard]] BraidWord concat(const BraidWord& other) const {
        if (other.strands != strands) throw braid_error("strand count mismatch");
        std::vector<int> out = letters;
        out.insert(out.end(), other.letters.begin(), other.letters.end());
        return {strands, std::move(out)};
    }
};

/// Parses whitespace-separated nonzero integers, e.g. "1 -2 1".
inline BraidWord parse_word(std::string_view text, int strands) {
    check_strands(strands);
    std::vector<int> letters;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i == text.size()) break;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        std::string token(text.substr(i, j - i));
        std::size_t used = 0;
        long value = 0;
        try {
            value = std::stol(token, &used);
        } catch (const std::exception&) {
            throw braid_error("malformed token '" + token + "'");
        }
        if (used != token.size()) throw braid_error("malformed token '" + token + "'");
        if (value == 0) throw braid_error("letter 0 is not an Artin generator");
        if (value >= strands || -value >= strands)
            throw braid_error("letter " + token + " out of range for B_" + std::to_string(strands));
        letters.push_back(static_cast<int>(value));
        i = j;
    }
    return {strands, std::move(letters)};
}

inline std::string format_word(const BraidWord& w) {
    std::string out;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(w.letters[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Permutation braids
// ---------------------------------------------------------------------------

namespace detail {

using Perm = std::span<std::uint8_t>;
using ConstPerm = std::span<const std::uint8_t>;

inline void set_identity(Perm p) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<std::uint8_t>(i);
}

inline void set_delta(Perm p) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint8_t>(n - 1 - i);
}

inline bool is_identity(ConstPerm p) {
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] != i) return false;
    return true;
}

inline bool is_delta(ConstPerm p) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i)
        if (p[i] != n - 1 - i) return false;
    return true;
}

inline std::int64_t inversions(ConstPerm p) {
    std::int64_t count = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) count += p[i] > p[j];
    return count;
}

/// Conjugation by Delta: sigma_i <-> sigma_{N-i}.
inline void flip(Perm p) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        std::uint8_t a = p[i], b = p[n - 1 - i];
        p[i] = static_cast<std::uint8_t>(n - 1 - b);
        p[n - 1 - i] = static_cast<std::uint8_t>(n - 1 - a);
    }
    if (n % 2) p[n / 2] = static_cast<std::uint8_t>(n - 1 - p[n / 2]);
}

/// Replaces p by its right complement p^{-1} Delta.
inline void right_complement(Perm p) {
    std::uint8_t inv[max_strands];
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) inv[p[i]] = static_cast<std::uint8_t>(i);
    for (std::size_t j = 0; j < n; ++j) p[j] = static_cast<std::uint8_t>(n - 1 - inv[j]);
}

/// Moves the left-gcd of b and the complement of a from b into a, leaving
/// the pair left-weighted. Returns true if any letter moved.
inline bool left_weight(Perm a, Perm b) {
    const std::size_t n = a.size();
    std::uint8_t inv[max_strands];
    for (std::size_t i = 0; i < n; ++i) inv[a[i]] = static_cast<std::uint8_t>(i);
    bool moved = false;
    std::size_t k = 0;
    while (k + 1 < n) {
        // sigma_k starts b and a * sigma_k is still a permutation braid
        if (b[k] > b[k + 1] && inv[k] < inv[k + 1]) {
            std::swap(b[k], b[k + 1]);
            std::swap(inv[k], inv[k + 1]);
            a[inv[k]] = static_cast<std::uint8_t>(k);
            a[inv[k + 1]] = static_cast<std::uint8_t>(k + 1);
            moved = true;
            k = k ? k - 1 : 0;
        } else {
            ++k;
        }
    }
    return moved;
}

/// Positive word (0-based letters) for a permutation braid.
inline void expand(ConstPerm p, std::vector<int>& out) {
    std::vector<std::uint8_t> q(p.begin(), p.end());
    for (std::size_t k = 0; k + 1 < q.size();) {
        if (q[k] > q[k + 1]) {
            out.push_back(static_cast<int>(k) + 1);
            std::swap(q[k], q[k + 1]);
            k = k ? k - 1 : 0;
        } else {
            ++k;
        }
    }
}

} // namespace detail

/// Positive braid in which every pair of strands crosses at most once.
struct PermutationBraid {
    int strands = 2;
    std::vector<std::uint8_t> perm; // 0-based one-line table

    bool operator==(const PermutationBraid&) const = default;

    static PermutationBraid identity(int n) {
        check_strands(n);
        PermutationBraid p{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n))};
        detail::set_identity(p.perm);
        return p;
    }

    /// From 1-based one-line notation.
    static PermutationBraid from_one_line(const std::vector<int>& images) {
        const int n = static_cast<int>(images.size());
        check_strands(n);
        PermutationBraid p{n, std::vector<std::uint8_t>(images.size())};
        std::vector<bool> seen(images.size(), false);
        for (std::size_t i = 0; i < images.size(); ++i) {
            int v = images[i];
            if (v < 1 || v > n || seen[v - 1]) throw braid_error("not a permutation of 1..N");
            seen[v - 1] = true;
            p.perm[i] = static_cast<std::uint8_t>(v - 1);
        }
        return p;
    }

    [[nodiscard]] std::vector<int> one_line() const {
        std::vector<int> out;
        out.reserve(perm.size());
        for (auto v : perm) out.push_back(v + 1);
        return out;
    }

    [[nodiscard]] bool is_identity() const { return detail::is_identity(perm); }
    [[nodiscard]] bool is_delta() const { return detail::is_delta(perm); }

    /// 1-based indices i such that sigma_i can begin a positive word for this braid.
    [[nodiscard]] std::vector<int> starting_set() const {
        std::vector<int> out;
        for (std::size_t k = 0; k + 1 < perm.size(); ++k)
            if (perm[k] > perm[k + 1]) out.push_back(static_cast<int>(k) + 1);
        return out;
    }

    /// 1-based indices i such that sigma_i can end a positive word for this braid.
    [[nodiscard]] std::vector<int> finishing_set() const {
        std::vector<std::uint8_t> inv(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = static_cast<std::uint8_t>(i);
        std::vector<int> out;
        for (std::size_t k = 0; k + 1 < inv.size(); ++k)
            if (inv[k] > inv[k + 1]) out.push_back(static_cast<int>(k) + 1);
        return out;
    }

    [[nodiscard]] BraidWord word() const {
        std::vector<int> letters;
        detail::expand(perm, letters);
        return {strands, std::move(letters)};
    }
};

/// Number of crossings, i.e. the Artin length of the permutation braid.
inline std::int64_t inversions(const PermutationBraid& p) { return detail::inversions(p.perm); }

/// The half twist Delta_N.
inline PermutationBraid delta(int strands) {
    if (strands < 2) throw braid_error("Delta_N needs N >= 2");
    check_strands(strands);
    PermutationBraid p{strands, std::vector<std::uint8_t>(static_cast<std::size_t>(strands))};
    detail::set_delta(p.perm);
    return p;
}

// ---------------------------------------------------------------------------
// Left canonical form
// ---------------------------------------------------------------------------

class GarsideNormalForm {
public:
    GarsideNormalForm() : GarsideNormalForm(2) {}
    explicit GarsideNormalForm(int strands) : strands_(strands) { check_strands(strands); }

    [[nodiscard]] int strands() const { return strands_; }
    /// Power of Delta^{-1}.
    [[nodiscard]] std::int64_t delta_exponent() const { return r_; }
    [[nodiscard]] std::size_t factor_count() const { return data_.size() / static_cast<std::size_t>(strands_); }

    [[nodiscard]] std::span<const std::uint8_t> factor(std::size_t i) const {
        const auto n = static_cast<std::size_t>(strands_);
        return {data_.data() + i * n, n};
    }

    [[nodiscard]] PermutationBraid factor_braid(std::size_t i) const {
        auto f = factor(i);
        return {strands_, std::vector<std::uint8_t>(f.begin(), f.end())};
    }

    [[nodiscard]] std::vector<PermutationBraid> factors() const {
        std::vector<PermutationBraid> out;
        for (std::size_t i = 0; i < factor_count(); ++i) out.push_back(factor_braid(i));
        return out;
    }

    [[nodiscard]] bool is_identity() const { return r_ == 0 && data_.empty(); }

    bool operator==(const GarsideNormalForm&) const = default;

    /// Builds the normal form of Delta^{-r} s_1 ... s_L for arbitrary
    /// permutation braids s_i, given as a flat table buffer.
    static GarsideNormalForm from_simples(int strands, std::int64_t r, std::span<const std::uint8_t> simples);

    /// Re-expands into Artin letters: r copies of Delta^{-1}, then each factor.
    [[nodiscard]] BraidWord word() const;

private:
    friend GarsideNormalForm gnf_multiply(const GarsideNormalForm&, const GarsideNormalForm&);
    friend GarsideNormalForm gnf_inverse(const GarsideNormalForm&);

    // Prepends a permutation braid and restores left-weightedness.
    void prepend(std::span<const std::uint8_t> simple);
    // Cancels leading Delta factors against Delta^{-r}; drops identity factors.
    void settle();

    int strands_;
    std::int64_t r_ = 0;
    std::vector<std::uint8_t> data_; // factor_count * strands, one table per factor
};

inline void GarsideNormalForm::prepend(std::span<const std::uint8_t> simple) {
    const auto n = static_cast<std::size_t>(strands_);
    if (detail::is_identity(simple)) return;
    data_.insert(data_.begin(), simple.begin(), simple.end());
    std::size_t q = factor_count();
    for (std::size_t i = 0; i + 1 < q; ++i) {
        detail::Perm left{data_.data() + i * n, n};
        detail::Perm right{data_.data() + (i + 1) * n, n};
        if (!detail::left_weight(left, right)) break;
        if (detail::is_identity(right)) {
            data_.erase(data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * n),
                        data_.begin() + static_cast<std::ptrdiff_t>((i + 2) * n));
            break;
        }
    }
}

inline void GarsideNormalForm::settle() {
    const auto n = static_cast<std::size_t>(strands_);
    std::size_t leading = 0;
    while (r_ > 0 && leading < factor_count() && detail::is_delta(factor(leading))) {
        ++leading;
        --r_;
    }
    data_.erase(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(leading * n));
    while (!data_.empty() && detail::is_identity(factor(factor_count() - 1)))
        data_.resize(data_.size() - n);
}

inline GarsideNormalForm GarsideNormalForm::from_simples(int strands, std::int64_t r,
                                                         std::span<const std::uint8_t> simples) {
    GarsideNormalForm out(strands);
    const auto n = static_cast<std::size_t>(strands);
    if (simples.size() % n) throw braid_error("simple buffer is not a whole number of tables");
    if (r < 0) throw braid_error("negative Delta^{-1} exponent");
    out.r_ = r;
    for (std::size_t i = simples.size() / n; i-- > 0;) out.prepend(simples.subspan(i * n, n));
    out.settle();
    return out;
}

inline BraidWord GarsideNormalForm::word() const {
    std::vector<int> letters;
    if (r_ > 0) {
        std::vector<int> d;
        std::vector<std::uint8_t> dp(static_cast<std::size_t>(strands_));
        detail::set_delta(dp);
        detail::expand(dp, d);
        for (std::int64_t t = 0; t < r_; ++t)
            for (auto it = d.rbegin(); it != d.rend(); ++it) letters.push_back(-*it);
    }
    for (std::size_t i = 0; i < factor_count(); ++i) detail::expand(factor(i), letters);
    return {strands_, std::move(letters)};
}

/// Left canonical form of the element represented by a word.
inline GarsideNormalForm normal_form(const BraidWord& w) {
    const int n = w.strands;
    const auto sn = static_cast<std::size_t>(n);
    // sigma_i^{-1} = Delta^{-1} (Delta sigma_i^{-1}); each Delta^{-1} is pushed to
    // the front, flipping every simple it passes.
    std::int64_t negatives = 0;
    for (int e : w.letters) negatives += e < 0;
    std::vector<std::uint8_t> simples(w.letters.size() * sn);
    std::int64_t after = negatives;
    for (std::size_t j = 0; j < w.letters.size(); ++j) {
        const int e = w.letters[j];
        const auto k = static_cast<std::size_t>(std::abs(e) - 1);
        detail::Perm p{simples.data() + j * sn, sn};
        if (e > 0) {
            detail::set_identity(p);
            std::swap(p[k], p[k + 1]);
        } else {
            // table of Delta sigma_k^{-1}: swap the values k, k+1 of Delta
            detail::set_delta(p);
            std::swap(p[sn - 2 - k], p[sn - 1 - k]);
            --after;
        }
        if (after % 2) detail::flip(p);
    }
    return GarsideNormalForm::from_simples(n, negatives, simples);
}

inline GarsideNormalForm gnf_multiply(const GarsideNormalForm& u, const GarsideNormalForm& v) {
    if (u.strands_ != v.strands_) throw braid_error("strand count mismatch in multiplication");
    const auto n = static_cast<std::size_t>(u.strands_);
    // Delta^{-a} U Delta^{-b} V = Delta^{-(a+b)} flip^b(U) V
    GarsideNormalForm out = v;
    out.r_ = u.r_ + v.r_;
    const bool flipped = v.r_ % 2 != 0;
    std::uint8_t buf[max_strands];
    for (std::size_t i = u.factor_count(); i-- > 0;) {
        auto f = u.factor(i);
        std::copy(f.begin(), f.end(), buf);
        if (flipped) detail::flip({buf, n});
        out.prepend({buf, n});
    }
    out.settle();
    return out;
}

inline GarsideNormalForm gnf_inverse(const GarsideNormalForm& u) {
    // (Delta^{-r} p_1..p_q)^{-1} = Delta^{-q} flip^{q+r}(dp_q) ... flip^{1+r}(dp_1) Delta^{r}
    // with dp = p^{-1} Delta; the trailing Delta^r is moved to the front.
    const auto n = static_cast<std::size_t>(u.strands_);
    const std::size_t q = u.factor_count();
    const auto r = static_cast<std::size_t>(u.r_);
    std::vector<std::uint8_t> simples((r + q) * n);
    for (std::size_t t = 0; t < r; ++t) detail::set_delta({simples.data() + t * n, n});
    for (std::size_t pos = 0; pos < q; ++pos) {
        const std::size_t i = q - 1 - pos; // factor index, 0-based
        detail::Perm p{simples.data() + (r + pos) * n, n};
        auto f = u.factor(i);
        std::copy(f.begin(), f.end(), p.begin());
        detail::right_complement(p);
        if ((i + 1 + r) % 2) detail::flip(p);
    }
    return GarsideNormalForm::from_simples(u.strands_, static_cast<std::int64_t>(q), simples);
}

inline bool is_identity(const GarsideNormalForm& u) { return u.is_identity(); }

inline GarsideNormalForm identity_form(int strands) { return GarsideNormalForm(strands); }

/// Permutation of {0..N-1} induced by the element: final position of the
/// strand starting at each position.
inline std::vector<std::uint8_t> induced_permutation(const GarsideNormalForm& u) {
    const auto n = static_cast<std::size_t>(u.strands());
    std::vector<std::uint8_t> out(n), tmp(n);
    detail::set_identity(out);
    auto compose = [&](std::span<const std::uint8_t> f) {
        for (std::size_t i = 0; i < n; ++i) tmp[i] = f[out[i]];
        out.swap(tmp);
    };
    std::vector<std::uint8_t> d(n);
    detail::set_delta(d); // Delta^{-1} has the same permutation as Delta
    for (std::int64_t t = 0; t < u.delta_exponent(); ++t) compose(d);
    for (std::size_t i = 0; i < u.factor_count(); ++i) compose(u.factor(i));
    return out;
}

/// Text form: "D^-r | f1 ; f2 ; ..." with 1-based one-line permutations.
inline std::string format_normal_form(const GarsideNormalForm& u) {
    std::ostringstream os;
    os << "D^-" << u.delta_exponent() << " |";
    for (std::size_t i = 0; i < u.factor_count(); ++i) {
        os << (i ? " ;" : "");
        for (auto v : u.factor(i)) os << ' ' << (v + 1);
    }
    return os.str();
}

/// Parses the text form produced by format_normal_form; the result is
/// renormalized, so any factorization is accepted.
inline GarsideNormalForm parse_normal_form(std::string_view text, int strands) {
    check_strands(strands);
    auto bar = text.find('|');
    std::string head(text.substr(0, bar));
    head.erase(std::remove_if(head.begin(), head.end(), [](unsigned char c) { return std::isspace(c); }), head.end());
    if (bar == std::string_view::npos || head.rfind("D^-", 0) != 0)
        throw braid_error("normal form text must start with 'D^-r |'");
    std::int64_t r = 0;
    try {
        std::size_t used = 0;
        r = std::stoll(head.substr(3), &used);
        if (used != head.size() - 3 || r < 0) throw braid_error("bad Delta exponent");
    } catch (const std::logic_error&) {
        throw braid_error("bad Delta exponent");
    }
    std::vector<std::uint8_t> simples;
    std::string rest(text.substr(bar + 1));
    std::stringstream factors(rest);
    std::string chunk;
    while (std::getline(factors, chunk, ';')) {
        std::istringstream is(chunk);
        std::vector<int> images;
        std::string tok;
        while (is >> tok) {
            try {
                std::size_t used = 0;
                images.push_back(std::stoi(tok, &used));
                if (used != tok.size()) throw braid_error("malformed token '" + tok + "'");
            } catch (const std::logic_error&) {
                throw braid_error("malformed token '" + tok + "'");
            }
        }
        if (images.empty()) continue;
        if (static_cast<int>(images.size()) != strands) throw braid_error("factor has wrong strand count");
        auto p = PermutationBraid::from_one_line(images);
        simples.insert(simples.end(), p.perm.begin(), p.perm.end());
    }
    return GarsideNormalForm::from_simples(strands, r, simples);
}

/// Normal form of a single generator power sigma_i^{sign}.
inline GarsideNormalForm letter_form(int strands, int letter) {
    return normal_form(BraidWord(strands, {letter}));
}

} // namespace braidlen
