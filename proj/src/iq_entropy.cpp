// SPDX-License-Identifier: Apache-2.0
//
// cranlab: C-RAN capacity and fronthaul engineering toolkit
// Copyright (C) 2026 The cranlab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "cranlab/errors.hpp"
#include "cranlab/iq.hpp"

namespace cranlab
{

namespace
{

std::vector<std::uint8_t> huffman_lengths(std::span<const std::uint64_t> counts)
{
    const std::size_t n = counts.size();
    std::vector<std::uint8_t> lengths(n, 0);
    std::vector<std::size_t> used;
    for (std::size_t s = 0; s < n; ++s)
        if (counts[s] > 0)
            used.push_back(s);
    if (used.empty())
        return lengths;
    if (used.size() == 1)
    {
        lengths[used.front()] = 1;
        return lengths;
    }

    // Nodes: leaves first, then internal nodes; ties broken by node id for determinism.
    std::vector<std::size_t> parent(2 * used.size() - 1, 0);
    using Item = std::pair<std::uint64_t, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::size_t k = 0; k < used.size(); ++k)
        heap.emplace(counts[used[k]], k);
    std::size_t next = used.size();
    while (heap.size() > 1)
    {
        const auto a = heap.top();
        heap.pop();
        const auto b = heap.top();
        heap.pop();
        parent[a.second] = next;
        parent[b.second] = next;
        heap.emplace(a.first + b.first, next++);
    }
    const std::size_t root = next - 1;
    std::vector<std::uint32_t> depth(next, 0);
    for (std::size_t node = root; node-- > 0;)
        depth[node] = depth[parent[node]] + 1;
    for (std::size_t k = 0; k < used.size(); ++k)
        lengths[used[k]] = static_cast<std::uint8_t>(std::min<std::uint32_t>(depth[k], 255));
    return lengths;
}

} // namespace

PrefixCode PrefixCode::from_counts(std::span<const std::uint64_t> counts)
{
    std::vector<std::uint64_t> c(counts.begin(), counts.end());
    for (;;)
    {
        auto lengths = huffman_lengths(c);
        if (*std::max_element(lengths.begin(), lengths.end(), [](auto a, auto b) { return a < b; }) <= max_code_length)
            return from_lengths(std::move(lengths));
        // Flatten the distribution until the deepest code fits.
        for (auto &v : c)
            if (v > 0)
                v = (v + 1) / 2;
    }
}

PrefixCode PrefixCode::from_lengths(std::vector<std::uint8_t> lengths)
{
    PrefixCode code;
    code.codes.assign(lengths.size(), 0);
    std::vector<std::size_t> order;
    for (std::size_t s = 0; s < lengths.size(); ++s)
    {
        if (lengths[s] > max_code_length)
            fail(ErrorCode::MalformedBitstream, "prefix code length exceeds 32 bits");
        if (lengths[s] > 0)
            order.push_back(s);
    }
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return lengths[a] < lengths[b]; });

    // Kraft sum in units of 2^-32.
    std::uint64_t kraft = 0;
    for (auto s : order)
        kraft += std::uint64_t{1} << (max_code_length - lengths[s]);
    if (kraft > (std::uint64_t{1} << max_code_length))
        fail(ErrorCode::MalformedBitstream, "prefix code lengths violate the Kraft inequality");

    std::uint64_t next = 0;
    unsigned prev = order.empty() ? 0 : lengths[order.front()];
    for (auto s : order)
    {
        next <<= (lengths[s] - prev);
        prev = lengths[s];
        code.codes[s] = next++;
    }
    code.lengths = std::move(lengths);
    return code;
}

double PrefixCode::average_length(std::span<const std::uint64_t> counts) const
{
    double total = 0.0, bits = 0.0;
    for (std::size_t s = 0; s < counts.size() && s < lengths.size(); ++s)
    {
        total += static_cast<double>(counts[s]);
        bits += static_cast<double>(counts[s]) * lengths[s];
    }
    return total > 0.0 ? bits / total : 0.0;
}

void BitWriter::put(std::uint64_t value, unsigned nbits)
{
    for (unsigned k = nbits; k-- > 0;)
    {
        if (bits_ % 8 == 0)
            bytes_.push_back(0);
        if ((value >> k) & 1U)
            bytes_.back() |= static_cast<std::uint8_t>(0x80U >> (bits_ % 8));
        ++bits_;
    }
}

std::uint64_t BitReader::get(unsigned nbits)
{
    if (nbits > remaining())
        fail(ErrorCode::MalformedBitstream, "payload ended early");
    std::uint64_t v = 0;
    for (unsigned k = 0; k < nbits; ++k, ++pos_)
        v = (v << 1) | ((bytes_[pos_ / 8] >> (7 - pos_ % 8)) & 1U);
    return v;
}

void entropy_encode(std::span<const std::uint32_t> symbols, const PrefixCode &code, BitWriter &out)
{
    for (auto s : symbols)
    {
        if (s >= code.alphabet() || code.lengths[s] == 0)
            fail(ErrorCode::InvalidArgument, "symbol has no code word");
        out.put(code.codes[s], code.lengths[s]);
    }
}

std::vector<std::uint32_t> entropy_decode(BitReader &in, std::size_t count, const PrefixCode &code)
{
    // Canonical decoding tables: first code and symbol offset per length.
    std::vector<std::uint32_t> sorted;
    std::vector<std::uint64_t> per_len(max_code_length + 1, 0);
    for (std::size_t s = 0; s < code.alphabet(); ++s)
        if (code.lengths[s] > 0)
        {
            sorted.push_back(static_cast<std::uint32_t>(s));
            ++per_len[code.lengths[s]];
        }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](auto a, auto b) { return code.lengths[a] < code.lengths[b]; });
    std::vector<std::uint64_t> first(max_code_length + 1, 0), offset(max_code_length + 1, 0);
    std::uint64_t c = 0, idx = 0;
    for (unsigned len = 1; len <= max_code_length; ++len)
    {
        c = (c + per_len[len - 1]) << 1;
        first[len] = c;
        offset[len] = idx;
        idx += per_len[len];
    }

    std::vector<std::uint32_t> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
    {
        std::uint64_t v = 0;
        bool found = false;
        for (unsigned len = 1; len <= max_code_length; ++len)
        {
            v = (v << 1) | in.get(1);
            if (v >= first[len] && v - first[len] < per_len[len])
            {
                out.push_back(sorted[offset[len] + (v - first[len])]);
                found = true;
                break;
            }
        }
        if (!found)
            fail(ErrorCode::MalformedBitstream, "invalid prefix code word");
    }
    return out;
}

std::vector<std::uint64_t> symbol_counts(std::span<const std::uint32_t> symbols, std::size_t alphabet)
{
    std::vector<std::uint64_t> counts(alphabet, 0);
    for (auto s : symbols)
    {
        if (s >= alphabet)
            fail(ErrorCode::InvalidArgument, "symbol outside the alphabet");
        ++counts[s];
    }
    return counts;
}

double empirical_entropy(std::span<const std::uint32_t> symbols)
{
    if (symbols.empty())
        return 0.0;
    std::vector<std::uint32_t> sorted(symbols.begin(), symbols.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double h = 0.0;
    for (std::size_t k = 0; k < sorted.size();)
    {
        std::size_t j = k;
        while (j < sorted.size() && sorted[j] == sorted[k])
            ++j;
        const double p = static_cast<double>(j - k) / n;
        h -= p * std::log2(p);
        k = j;
    }
    return h;
}

} // namespace cranlab
