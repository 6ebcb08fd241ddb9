#ifndef CYLTREE_SRC_UNION_FIND_HPP
#define CYLTREE_SRC_UNION_FIND_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace cyltree::detail {

// Union by smallest encoding so component roots double as representatives.
struct UnionFind {
    std::vector<std::uint32_t> parent;

    explicit UnionFind(std::uint32_t size) : parent(size) {
        for (std::uint32_t i = 0; i < size; ++i) parent[i] = i;
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    bool merge(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        parent[b] = a;
        return true;
    }
};

}  // namespace cyltree::detail

#endif  // CYLTREE_SRC_UNION_FIND_HPP
