#include "semcom/huffman.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "semcom/errors.hpp"

namespace semcom {

int HuffmanCodebook::max_length() const {
    int m = 0;
    for (int s = 0; s < 256; ++s) m = std::max(m, static_cast<int>(length[static_cast<std::size_t>(s)]));
    return m;
}

double HuffmanCodebook::average_length(const std::map<std::uint8_t, std::uint64_t>& freq) const {
    long double total = 0, weighted = 0;
    for (const auto& [sym, count] : freq) {
        if (count == 0) continue;
        total += static_cast<long double>(count);
        weighted += static_cast<long double>(count) * length[sym];
    }
    return total > 0 ? static_cast<double>(weighted / total) : 0.0;
}

namespace {

struct Node {
    std::uint64_t weight;
    int left = -1, right = -1;  // -1 children mean leaf
    std::uint8_t symbol = 0;
};

// Two-queue Huffman: leaves sorted by (weight, symbol), merged nodes FIFO.
// Ties prefer the leaf queue, which keeps construction deterministic.
std::array<std::uint8_t, 256> code_lengths(const std::vector<std::pair<std::uint8_t, std::uint64_t>>& syms) {
    std::array<std::uint8_t, 256> lengths{};
    std::vector<Node> nodes;
    nodes.reserve(syms.size() * 2);
    std::deque<int> leaves, merged;
    for (const auto& [sym, w] : syms) {
        nodes.push_back({w, -1, -1, sym});
        leaves.push_back(static_cast<int>(nodes.size()) - 1);
    }
    auto pop_min = [&]() {
        int idx;
        if (merged.empty() ||
            (!leaves.empty() && nodes[static_cast<std::size_t>(leaves.front())].weight <=
                                    nodes[static_cast<std::size_t>(merged.front())].weight)) {
            idx = leaves.front();
            leaves.pop_front();
        } else {
            idx = merged.front();
            merged.pop_front();
        }
        return idx;
    };
    while (leaves.size() + merged.size() > 1) {
        const int a = pop_min();
        const int b = pop_min();
        nodes.push_back({nodes[static_cast<std::size_t>(a)].weight + nodes[static_cast<std::size_t>(b)].weight, a, b, 0});
        merged.push_back(static_cast<int>(nodes.size()) - 1);
    }

    // depth-first walk assigning depths; the lone-symbol tree yields depth 1
    if (nodes.size() == 1) {
        lengths[nodes[0].symbol] = 1;
        return lengths;
    }
    std::vector<std::pair<int, int>> stack{{merged.front(), 0}};
    while (!stack.empty()) {
        auto [idx, depth] = stack.back();
        stack.pop_back();
        const Node& n = nodes[static_cast<std::size_t>(idx)];
        if (n.left < 0) {
            lengths[n.symbol] = static_cast<std::uint8_t>(depth);
        } else {
            stack.push_back({n.left, depth + 1});
            stack.push_back({n.right, depth + 1});
        }
    }
    return lengths;
}

}  // namespace

HuffmanCodebook huffman_build(const std::map<std::uint8_t, std::uint64_t>& frequencies) {
    std::vector<std::pair<std::uint8_t, std::uint64_t>> syms;
    for (const auto& [sym, count] : frequencies)
        if (count > 0) syms.push_back({sym, count});
    if (syms.empty()) throw ConfigError("huffman_build: no symbol has a positive count");
    std::sort(syms.begin(), syms.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });

    HuffmanCodebook book;
    book.length = code_lengths(syms);

    // canonical assignment: symbols ordered by (length, value)
    std::vector<std::uint8_t> order;
    for (int s = 0; s < 256; ++s)
        if (book.length[static_cast<std::size_t>(s)]) order.push_back(static_cast<std::uint8_t>(s));
    std::sort(order.begin(), order.end(), [&](std::uint8_t a, std::uint8_t b) {
        return book.length[a] != book.length[b] ? book.length[a] < book.length[b] : a < b;
    });

    std::uint32_t code = 0;
    int prev_len = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int len = book.length[order[i]];
        code <<= (len - prev_len);
        book.code[order[i]] = code;
        ++code;
        prev_len = len;
    }

    book.canonical_order = order;
    int idx = 0;
    for (int len = 1; len <= 32; ++len) {
        book.level_count[static_cast<std::size_t>(len)] = 0;
        book.first_index[static_cast<std::size_t>(len)] = static_cast<std::uint32_t>(idx);
        book.first_code[static_cast<std::size_t>(len)] = 0;
        bool any = false;
        while (idx < static_cast<int>(order.size()) && book.length[order[static_cast<std::size_t>(idx)]] == len) {
            if (!any) {
                book.first_code[static_cast<std::size_t>(len)] = book.code[order[static_cast<std::size_t>(idx)]];
                any = true;
            }
            ++book.level_count[static_cast<std::size_t>(len)];
            ++idx;
        }
    }
    return book;
}

BitFrame huffman_encode(std::span<const std::uint8_t> symbols, const HuffmanCodebook& book) {
    BitFrame frame;
    frame.purpose = "huffman";
    for (std::uint8_t sym : symbols) {
        const int len = book.length[sym];
        if (len == 0) throw CodingError("huffman_encode: symbol not in codebook");
        append_bits(frame.bits, book.code[sym], len);
    }
    return frame;
}

namespace {

std::vector<std::uint8_t> decode_impl(std::span<const std::uint8_t> bits,
                                      const HuffmanCodebook& book,
                                      std::size_t max_symbols, bool strict) {
    std::vector<std::uint8_t> out;
    std::uint32_t acc = 0;
    int len = 0;
    const int longest = book.max_length();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (out.size() >= max_symbols) {
            len = 0;
            break;
        }
        acc = (acc << 1) | (bits[i] & 1u);
        ++len;
        if (len > longest) {
            if (strict) throw CodingError("huffman_decode: invalid code");
            len = 0;
            break;
        }
        const std::uint32_t count = book.level_count[static_cast<std::size_t>(len)];
        if (count == 0) continue;
        const std::uint32_t first = book.first_code[static_cast<std::size_t>(len)];
        if (acc >= first && acc < first + count) {
            out.push_back(book.canonical_order[book.first_index[static_cast<std::size_t>(len)] + (acc - first)]);
            acc = 0;
            len = 0;
        }
    }
    if (strict && len != 0) throw CodingError("huffman_decode: dangling suffix bits");
    return out;
}

}  // namespace

std::vector<std::uint8_t> huffman_decode(const BitFrame& frame, const HuffmanCodebook& book) {
    return decode_impl(frame.bits, book, static_cast<std::size_t>(-1), true);
}

std::vector<std::uint8_t> huffman_decode_prefix(std::span<const std::uint8_t> bits,
                                                const HuffmanCodebook& book,
                                                std::size_t max_symbols) {
    return decode_impl(bits, book, max_symbols, false);
}

double empirical_entropy(const std::map<std::uint8_t, std::uint64_t>& frequencies) {
    long double total = 0;
    for (const auto& [sym, count] : frequencies) total += static_cast<long double>(count);
    if (total <= 0) return 0.0;
    long double h = 0;
    for (const auto& [sym, count] : frequencies) {
        if (count == 0) continue;
        const long double p = static_cast<long double>(count) / total;
        h -= p * std::log2(p);
    }
    return static_cast<double>(h);
}

}  // namespace semcom
