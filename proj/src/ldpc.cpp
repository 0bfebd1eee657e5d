#include "semcom/ldpc.hpp"

#include <algorithm>
#include <set>

#include "semcom/errors.hpp"
#include "semcom/rng.hpp"

namespace semcom {

namespace {

constexpr int kColWeight = 3;
constexpr int kRowWeight = 6;

struct Construction {
    std::vector<std::vector<int>> check_cols;  // per row, columns
    std::vector<std::vector<int>> col_checks;  // per column, rows
};

// Stub-matching construction: columns draw 3 distinct rows from remaining
// row capacity, rejecting any 4-cycle (two columns sharing two rows).
bool try_construct(std::mt19937_64& eng, int n, int rows, Construction& out) {
    std::vector<int> capacity(static_cast<std::size_t>(rows), kRowWeight);
    std::set<std::pair<int, int>> used_pairs;
    out.check_cols.assign(static_cast<std::size_t>(rows), {});
    out.col_checks.assign(static_cast<std::size_t>(n), {});

    for (int c = 0; c < n; ++c) {
        bool placed = false;
        for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
            // sample 3 distinct rows weighted by remaining stubs
            std::vector<int> stubs;
            stubs.reserve(static_cast<std::size_t>(rows) * kRowWeight);
            for (int r = 0; r < rows; ++r)
                for (int s = 0; s < capacity[static_cast<std::size_t>(r)]; ++s) stubs.push_back(r);
            if (stubs.size() < kColWeight) return false;
            std::array<int, kColWeight> pick{};
            bool distinct = true;
            std::set<int> chosen;
            for (int i = 0; i < kColWeight; ++i) {
                pick[static_cast<std::size_t>(i)] = stubs[next_below(eng, stubs.size())];
                if (!chosen.insert(pick[static_cast<std::size_t>(i)]).second) {
                    distinct = false;
                    break;
                }
            }
            if (!distinct) continue;
            std::sort(pick.begin(), pick.end());
            const std::array<std::pair<int, int>, 3> pairs{
                std::pair{pick[0], pick[1]}, std::pair{pick[0], pick[2]}, std::pair{pick[1], pick[2]}};
            bool clash = false;
            for (const auto& p : pairs)
                if (used_pairs.count(p)) {
                    clash = true;
                    break;
                }
            if (clash) continue;
            for (const auto& p : pairs) used_pairs.insert(p);
            for (int r : pick) {
                --capacity[static_cast<std::size_t>(r)];
                out.check_cols[static_cast<std::size_t>(r)].push_back(c);
                out.col_checks[static_cast<std::size_t>(c)].push_back(r);
            }
            placed = true;
        }
        if (!placed) return false;
    }
    for (int r = 0; r < rows; ++r)
        if (capacity[static_cast<std::size_t>(r)] != 0) return false;
    return true;
}

using Row = std::vector<std::uint64_t>;

void row_xor(Row& a, const Row& b) {
    for (std::size_t w = 0; w < a.size(); ++w) a[w] ^= b[w];
}

bool get_bit(const Row& a, int c) {
    return (a[static_cast<std::size_t>(c) >> 6] >> (static_cast<unsigned>(c) & 63u)) & 1u;
}

void set_bit(Row& a, int c) {
    a[static_cast<std::size_t>(c) >> 6] |= 1ULL << (static_cast<unsigned>(c) & 63u);
}

}  // namespace

LdpcCode LdpcCode::make(int n, int k, int max_iterations, std::uint64_t seed) {
    if (n <= 0 || k <= 0 || k >= n) throw ConfigError("ldpc: need n > k > 0");
    if (n != 2 * k) throw ConfigError("ldpc: regular (3,6) code requires n = 2k");
    if (n % 2 != 0 || (3 * n) % kRowWeight != 0) throw ConfigError("ldpc: invalid geometry");
    if (max_iterations < 1) throw ConfigError("ldpc: max_iterations must be >= 1");
    const int rows = n - k;

    for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt > 10000) throw ConfigError("ldpc: construction did not converge");
        auto eng = make_engine(derive_seed(seed, 0x1D9Cu, attempt));
        Construction cons;
        if (!try_construct(eng, n, rows, cons)) continue;

        const std::size_t words = (static_cast<std::size_t>(n) + 63) / 64;
        std::vector<Row> mat(static_cast<std::size_t>(rows), Row(words, 0));
        for (int r = 0; r < rows; ++r)
            for (int c : cons.check_cols[static_cast<std::size_t>(r)]) set_bit(mat[static_cast<std::size_t>(r)], c);

        // Gauss-Jordan pass to find pivot (independent) columns.
        std::vector<Row> work = mat;
        std::vector<int> pivot_cols;
        int rank = 0;
        for (int c = 0; c < n && rank < rows; ++c) {
            int pr = -1;
            for (int r = rank; r < rows; ++r)
                if (get_bit(work[static_cast<std::size_t>(r)], c)) {
                    pr = r;
                    break;
                }
            if (pr < 0) continue;
            std::swap(work[static_cast<std::size_t>(pr)], work[static_cast<std::size_t>(rank)]);
            for (int r = 0; r < rows; ++r)
                if (r != rank && get_bit(work[static_cast<std::size_t>(r)], c))
                    row_xor(work[static_cast<std::size_t>(r)], work[static_cast<std::size_t>(rank)]);
            pivot_cols.push_back(c);
            ++rank;
        }
        if (rank < rows) continue;  // not full row rank, retry construction

        // Permute columns: non-pivot (message) positions first, pivot
        // (parity) positions last. Column permutation preserves regularity.
        std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
        for (int c : pivot_cols) is_pivot[static_cast<std::size_t>(c)] = 1;
        std::vector<int> new_to_old;
        new_to_old.reserve(static_cast<std::size_t>(n));
        for (int c = 0; c < n; ++c)
            if (!is_pivot[static_cast<std::size_t>(c)]) new_to_old.push_back(c);
        for (int c : pivot_cols) new_to_old.push_back(c);
        std::vector<int> old_to_new(static_cast<std::size_t>(n));
        for (int nc = 0; nc < n; ++nc) old_to_new[static_cast<std::size_t>(new_to_old[static_cast<std::size_t>(nc)])] = nc;

        LdpcCode code;
        code.n_ = n;
        code.k_ = k;
        code.max_iterations_ = max_iterations;
        code.check_cols_.assign(static_cast<std::size_t>(rows), {});
        code.col_checks_.assign(static_cast<std::size_t>(n), {});
        for (int r = 0; r < rows; ++r) {
            for (int c : cons.check_cols[static_cast<std::size_t>(r)])
                code.check_cols_[static_cast<std::size_t>(r)].push_back(old_to_new[static_cast<std::size_t>(c)]);
            std::sort(code.check_cols_[static_cast<std::size_t>(r)].begin(), code.check_cols_[static_cast<std::size_t>(r)].end());
            for (int c : code.check_cols_[static_cast<std::size_t>(r)])
                code.col_checks_[static_cast<std::size_t>(c)].push_back(r);
        }

        // Reduce the permuted H to [A | I]; the rows of A are the parity
        // equations p_r = sum_j A[r][j] m_j.
        std::vector<Row> red(static_cast<std::size_t>(rows), Row(words, 0));
        for (int r = 0; r < rows; ++r)
            for (int c : code.check_cols_[static_cast<std::size_t>(r)]) set_bit(red[static_cast<std::size_t>(r)], c);
        bool ok = true;
        for (int r = 0; r < rows && ok; ++r) {
            const int pc = k + r;
            int pr = -1;
            for (int rr = r; rr < rows; ++rr)
                if (get_bit(red[static_cast<std::size_t>(rr)], pc)) {
                    pr = rr;
                    break;
                }
            if (pr < 0) {
                ok = false;
                break;
            }
            std::swap(red[static_cast<std::size_t>(pr)], red[static_cast<std::size_t>(r)]);
            for (int rr = 0; rr < rows; ++rr)
                if (rr != r && get_bit(red[static_cast<std::size_t>(rr)], pc))
                    row_xor(red[static_cast<std::size_t>(rr)], red[static_cast<std::size_t>(r)]);
        }
        if (!ok) continue;

        const std::size_t pwords = (static_cast<std::size_t>(rows) + 63) / 64;
        code.parity_of_.assign(static_cast<std::size_t>(k), Row(pwords, 0));
        for (int r = 0; r < rows; ++r)
            for (int j = 0; j < k; ++j)
                if (get_bit(red[static_cast<std::size_t>(r)], j)) set_bit(code.parity_of_[static_cast<std::size_t>(j)], r);
        return code;
    }
}

std::vector<std::uint8_t> LdpcCode::syndrome(std::span<const std::uint8_t> word) const {
    std::vector<std::uint8_t> syn(check_cols_.size(), 0);
    for (std::size_t r = 0; r < check_cols_.size(); ++r) {
        std::uint8_t s = 0;
        for (int c : check_cols_[r]) s ^= word[static_cast<std::size_t>(c)] & 1u;
        syn[r] = s;
    }
    return syn;
}

bool LdpcCode::parity_ok(std::span<const std::uint8_t> word) const {
    for (const auto& cols : check_cols_) {
        std::uint8_t s = 0;
        for (int c : cols) s ^= word[static_cast<std::size_t>(c)] & 1u;
        if (s) return false;
    }
    return true;
}

Bits ldpc_encode(std::span<const std::uint8_t> message, const LdpcCode& code) {
    if (static_cast<int>(message.size()) != code.k())
        throw CodingError("ldpc_encode: message length must equal k");
    const int rows = code.n() - code.k();
    std::vector<std::uint64_t> parity(static_cast<std::size_t>((rows + 63) / 64), 0);
    for (int j = 0; j < code.k(); ++j)
        if (message[static_cast<std::size_t>(j)] & 1u) {
            const auto& pat = code.parity_of_[static_cast<std::size_t>(j)];
            for (std::size_t w = 0; w < parity.size(); ++w) parity[w] ^= pat[w];
        }
    Bits out(message.begin(), message.end());
    out.reserve(static_cast<std::size_t>(code.n()));
    for (int r = 0; r < rows; ++r)
        out.push_back(static_cast<std::uint8_t>((parity[static_cast<std::size_t>(r) >> 6] >> (static_cast<unsigned>(r) & 63u)) & 1u));
    return out;
}

LdpcDecodeResult ldpc_decode(std::span<const std::uint8_t> received, const LdpcCode& code) {
    if (static_cast<int>(received.size()) != code.n())
        throw CodingError("ldpc_decode: received length must equal n");
    Bits word(received.begin(), received.end());
    const int rows = code.n() - code.k();
    std::vector<std::uint8_t> syn(static_cast<std::size_t>(rows));
    std::vector<int> unsat(static_cast<std::size_t>(code.n()));

    bool converged = false;
    for (int it = 0; it <= code.max_iterations(); ++it) {
        bool all_ok = true;
        for (int r = 0; r < rows; ++r) {
            std::uint8_t s = 0;
            for (int c : code.check_cols_[static_cast<std::size_t>(r)]) s ^= word[static_cast<std::size_t>(c)];
            syn[static_cast<std::size_t>(r)] = s;
            all_ok = all_ok && !s;
        }
        if (all_ok) {
            converged = true;
            break;
        }
        if (it == code.max_iterations()) break;

        int max_unsat = 0;
        for (int c = 0; c < code.n(); ++c) {
            int u = 0;
            for (int r : code.col_checks_[static_cast<std::size_t>(c)]) u += syn[static_cast<std::size_t>(r)];
            unsat[static_cast<std::size_t>(c)] = u;
            max_unsat = std::max(max_unsat, u);
        }
        if (max_unsat < 2) break;  // flipping a minority-vote bit cannot help
        for (int c = 0; c < code.n(); ++c)
            if (unsat[static_cast<std::size_t>(c)] == max_unsat) word[static_cast<std::size_t>(c)] ^= 1u;
    }

    LdpcDecodeResult res;
    res.converged = converged;
    res.message.assign(word.begin(), word.begin() + code.k());
    return res;
}

Bits ldpc_encode_stream(std::span<const std::uint8_t> message, const LdpcCode& code) {
    const std::size_t k = static_cast<std::size_t>(code.k());
    const std::size_t blocks = message.empty() ? 0 : (message.size() + k - 1) / k;
    Bits out;
    out.reserve(blocks * static_cast<std::size_t>(code.n()));
    Bits block(k, 0);
    for (std::size_t b = 0; b < blocks; ++b) {
        std::fill(block.begin(), block.end(), 0);
        const std::size_t base = b * k;
        const std::size_t len = std::min(k, message.size() - base);
        std::copy(message.begin() + static_cast<std::ptrdiff_t>(base),
                  message.begin() + static_cast<std::ptrdiff_t>(base + len), block.begin());
        const Bits coded = ldpc_encode(block, code);
        out.insert(out.end(), coded.begin(), coded.end());
    }
    return out;
}

LdpcStreamDecodeResult ldpc_decode_stream(std::span<const std::uint8_t> received,
                                          const LdpcCode& code) {
    if (received.size() % static_cast<std::size_t>(code.n()) != 0)
        throw CodingError("ldpc_decode_stream: length must be a multiple of n");
    LdpcStreamDecodeResult res;
    res.blocks = static_cast<int>(received.size() / static_cast<std::size_t>(code.n()));
    res.message.reserve(static_cast<std::size_t>(res.blocks) * static_cast<std::size_t>(code.k()));
    for (int b = 0; b < res.blocks; ++b) {
        auto block = received.subspan(static_cast<std::size_t>(b) * static_cast<std::size_t>(code.n()),
                                      static_cast<std::size_t>(code.n()));
        auto dec = ldpc_decode(block, code);
        res.converged_blocks += dec.converged ? 1 : 0;
        res.message.insert(res.message.end(), dec.message.begin(), dec.message.end());
    }
    return res;
}

}  // namespace semcom
