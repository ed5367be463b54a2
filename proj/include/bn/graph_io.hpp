#ifndef BN_GRAPH_IO_HPP
#define BN_GRAPH_IO_HPP

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "bn/graph.hpp"

namespace bn {

// graph6: de-facto standard 6-bit encoding of the upper triangle, column by
// column. Bytes run from 63 to 126; n is one byte for n <= 62, otherwise the
// 126-prefixed long forms.
inline Graph parse_graph6(const std::string& text) {
    std::string s = text;
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
    std::size_t off = 0;
    const std::string header = ">>graph6<<";
    if (s.rfind(header, 0) == 0) off = header.size();
    if (off >= s.size()) throw Error("graph6: empty input at byte " + std::to_string(off));

    auto byte_at = [&](std::size_t i) -> int {
        if (i >= s.size()) throw Error("graph6: truncated input at byte " + std::to_string(i));
        int c = static_cast<unsigned char>(s[i]);
        if (c < 63 || c > 126)
            throw Error("graph6: invalid byte " + std::to_string(c) + " at byte " +
                        std::to_string(i));
        return c - 63;
    };

    long long n = 0;
    if (byte_at(off) != 63) {
        n = byte_at(off);
        off += 1;
    } else if (off + 1 < s.size() && byte_at(off + 1) != 63) {
        n = 0;
        for (int k = 1; k <= 3; ++k) n = (n << 6) | byte_at(off + k);
        off += 4;
    } else {
        n = 0;
        for (int k = 2; k <= 7; ++k) n = (n << 6) | byte_at(off + k);
        off += 8;
    }
    if (n > 100000) throw Error("graph6: vertex count too large: " + std::to_string(n));

    long long bits = n * (n - 1) / 2;
    std::size_t data_bytes = static_cast<std::size_t>((bits + 5) / 6);
    if (s.size() - off != data_bytes)
        throw Error("graph6: expected " + std::to_string(data_bytes) + " data bytes, got " +
                    std::to_string(s.size() - off) + " at byte " + std::to_string(off));

    std::vector<std::pair<int, int>> edges;
    long long bit = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i, ++bit) {
            int b = byte_at(off + static_cast<std::size_t>(bit / 6));
            if ((b >> (5 - bit % 6)) & 1) edges.push_back({i, j});
        }
    }
    // padding bits must be zero
    for (long long p = bits; p < static_cast<long long>(data_bytes) * 6; ++p) {
        int b = byte_at(off + static_cast<std::size_t>(p / 6));
        if ((b >> (5 - p % 6)) & 1)
            throw Error("graph6: nonzero padding at byte " +
                        std::to_string(off + static_cast<std::size_t>(p / 6)));
    }
    return Graph(static_cast<int>(n), std::move(edges));
}

inline std::string encode_graph6(const Graph& g) {
    long long n = g.num_vertices();
    std::string out;
    if (n <= 62) {
        out.push_back(static_cast<char>(63 + n));
    } else {
        out.push_back(static_cast<char>(126));
        for (int k = 2; k >= 0; --k) out.push_back(static_cast<char>(63 + ((n >> (6 * k)) & 63)));
    }
    long long bits = n * (n - 1) / 2;
    std::vector<int> data(static_cast<std::size_t>((bits + 5) / 6), 0);
    long long bit = 0;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i, ++bit) {
            if (g.has_edge(i, j))
                data[static_cast<std::size_t>(bit / 6)] |= 1 << (5 - bit % 6);
        }
    }
    for (int d : data) out.push_back(static_cast<char>(63 + d));
    return out;
}

// Plain edge-list format: "n m" on the first line, then one "u v" per line.
inline Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    long long n = 0, m = 0;
    if (!(in >> n >> m)) throw Error("edge list: missing n m header");
    std::vector<std::pair<int, int>> edges;
    for (long long i = 0; i < m; ++i) {
        long long u = 0, v = 0;
        if (!(in >> u >> v)) throw Error("edge list: truncated at edge " + std::to_string(i));
        edges.push_back({static_cast<int>(u), static_cast<int>(v)});
    }
    return Graph(static_cast<int>(n), std::move(edges));
}

inline std::string encode_edge_list(const Graph& g) {
    std::ostringstream out;
    out << g.num_vertices() << " " << g.num_edges() << "\n";
    for (auto [u, v] : g.edges()) out << u << " " << v << "\n";
    return out.str();
}

}  // namespace bn

#endif
