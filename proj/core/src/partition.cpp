// Copyright 2026 The dickevqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dickevqe/partition.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "dickevqe/ansatz.hpp"
#include "dickevqe/qsim.hpp"

namespace dickevqe {

std::vector<ProductTerm> decompose(DickeSpec spec, int j) {
    DickeSpec checked(spec.n, spec.k);
    if (j < 1 || j > checked.n - 1) {
        throw std::invalid_argument("upper fragment size j=" + std::to_string(j) + " outside [1, n-1]");
    }
    std::vector<ProductTerm> out;
    int lo = std::max(0, spec.k - (spec.n - j));
    int hi = std::min(j, spec.k);
    for (int i = lo; i <= hi; i++) {
        out.push_back({i, DickeSpec(j, i), DickeSpec(spec.n - j, spec.k - i)});
    }
    return out;
}

int split_min_upper(const Fragment &f) {
    int upper_size = f.size / 2;
    return std::max(0, f.weight - (f.size - upper_size));
}

int split_options(const Fragment &f) {
    if (f.size < 2) {
        return 0;
    }
    int upper_size = f.size / 2;
    return std::min(upper_size, f.weight) - split_min_upper(f) + 1;
}

std::pair<Fragment, Fragment> split_child(const Fragment &f, int local) {
    int options = split_options(f);
    if (local < 0 || local >= options) {
        throw std::out_of_range("sub-ansatz index " + std::to_string(local) + " outside [0, " +
                                std::to_string(options - 1) + "] for a " + std::to_string(f.size) +
                                "-qubit fragment of weight " + std::to_string(f.weight));
    }
    int upper_size = f.size / 2;
    int lower_size = f.size - upper_size;
    int u = split_min_upper(f) + local;
    Fragment upper{f.offset + lower_size, upper_size, u};
    Fragment lower{f.offset, lower_size, f.weight - u};
    return {upper, lower};
}

std::string format_id(const SubAnsatzId &id) {
    std::ostringstream ss;
    ss << "sa^" << id.depth() << "_[";
    for (size_t l = 0; l < id.levels.size(); l++) {
        if (l) {
            ss << ';';
        }
        for (size_t i = 0; i < id.levels[l].size(); i++) {
            if (i) {
                ss << ',';
            }
            ss << id.levels[l][i];
        }
    }
    ss << ']';
    return ss.str();
}

SubAnsatzId parse_id(std::string_view text) {
    auto fail = [&] { throw std::invalid_argument("bad sub-ansatz id '" + std::string(text) + "'"); };
    if (text.substr(0, 3) != "sa^") {
        fail();
    }
    size_t us = text.find('_');
    if (us == std::string_view::npos) {
        fail();
    }
    int depth = 0;
    try {
        depth = std::stoi(std::string(text.substr(3, us - 3)));
    } catch (const std::exception &) {
        fail();
    }
    std::string_view body = text.substr(us + 1);
    SubAnsatzId id;
    if (!body.empty() && body.front() != '[') {
        try {
            size_t used = 0;
            int v = std::stoi(std::string(body), &used);
            if (used != body.size()) {
                fail();
            }
            id.levels.push_back({v});
        } catch (const std::invalid_argument &) {
            fail();
        }
    } else {
        if (body.size() < 2 || body.back() != ']') {
            fail();
        }
        std::string inner(body.substr(1, body.size() - 2));
        std::stringstream levels(inner);
        std::string level;
        while (std::getline(levels, level, ';')) {
            std::stringstream entries(level);
            std::string entry;
            std::vector<int> vals;
            while (std::getline(entries, entry, ',')) {
                try {
                    size_t used = 0;
                    vals.push_back(std::stoi(entry, &used));
                    if (used != entry.size()) {
                        fail();
                    }
                } catch (const std::invalid_argument &) {
                    fail();
                }
            }
            if (vals.empty()) {
                fail();
            }
            id.levels.push_back(std::move(vals));
        }
    }
    if (id.depth() != depth) {
        fail();
    }
    return id;
}

SubAnsatz whole(DickeSpec root) {
    DickeSpec checked(root.n, root.k);
    return {checked, {}, {Fragment{0, root.n, root.k}}};
}

SubAnsatz resolve(DickeSpec root, const SubAnsatzId &id) {
    SubAnsatz sa = whole(root);
    sa.id = id;
    for (size_t l = 0; l < id.levels.size(); l++) {
        const auto &idx = id.levels[l];
        if (idx.size() != sa.fragments.size()) {
            throw std::out_of_range("level " + std::to_string(l + 1) + " of " + format_id(id) + " needs " +
                                    std::to_string(sa.fragments.size()) + " indices");
        }
        std::vector<Fragment> next;
        next.reserve(2 * sa.fragments.size());
        for (size_t f = 0; f < sa.fragments.size(); f++) {
            auto [upper, lower] = split_child(sa.fragments[f], idx[f]);
            next.push_back(upper);
            next.push_back(lower);
        }
        sa.fragments = std::move(next);
    }
    return sa;
}

PartitionTree::PartitionTree(DickeSpec root, int depth) : root_(root), depth_(depth) {}

PartitionTree equilibrium_partition(DickeSpec spec, int depth) {
    DickeSpec checked(spec.n, spec.k);
    if (depth < 1) {
        throw std::invalid_argument("partition depth must be at least 1");
    }
    if (depth >= 63 || checked.n % (int64_t{1} << depth) != 0) {
        throw std::invalid_argument("n=" + std::to_string(spec.n) + " is not divisible by 2^" + std::to_string(depth));
    }
    return PartitionTree(checked, depth);
}

std::vector<int> PartitionTree::child_shape(const SubAnsatzId &node) const {
    if (node.depth() >= depth_) {
        throw std::out_of_range(format_id(node) + " is already at full depth");
    }
    SubAnsatz sa = resolve(root_, node);
    std::vector<int> shape;
    for (const auto &f : sa.fragments) {
        shape.push_back(split_options(f));
    }
    return shape;
}

std::vector<SubAnsatzId> PartitionTree::children(const SubAnsatzId &node) const {
    std::vector<int> shape = child_shape(node);
    std::vector<SubAnsatzId> out;
    std::vector<int> cur(shape.size(), 0);
    for (int s : shape) {
        if (s <= 0) {
            return out;
        }
    }
    while (true) {
        SubAnsatzId child = node;
        child.levels.push_back(cur);
        out.push_back(std::move(child));
        int pos = static_cast<int>(cur.size()) - 1;
        while (pos >= 0 && ++cur[static_cast<size_t>(pos)] == shape[static_cast<size_t>(pos)]) {
            cur[static_cast<size_t>(pos)] = 0;
            pos--;
        }
        if (pos < 0) {
            break;
        }
    }
    return out;
}

std::vector<SubAnsatzId> PartitionTree::leaves() const {
    std::vector<SubAnsatzId> frontier{SubAnsatzId{}};
    for (int l = 0; l < depth_; l++) {
        std::vector<SubAnsatzId> next;
        for (const auto &node : frontier) {
            auto kids = children(node);
            next.insert(next.end(), kids.begin(), kids.end());
        }
        frontier = std::move(next);
    }
    return frontier;
}

uint64_t PartitionTree::leaf_count() const {
    std::map<std::tuple<int, int, int>, uint64_t> memo;
    auto count = [&](auto &&self, const Fragment &f, int d) -> uint64_t {
        if (d == 0) {
            return 1;
        }
        auto key = std::make_tuple(f.size, f.weight, d);
        if (auto it = memo.find(key); it != memo.end()) {
            return it->second;
        }
        uint64_t total = 0;
        for (int i = 0; i < split_options(f); i++) {
            auto [u, l] = split_child(f, i);
            total += self(self, u, d - 1) * self(self, l, d - 1);
        }
        memo[key] = total;
        return total;
    };
    return count(count, Fragment{0, root_.n, root_.k}, depth_);
}

uint64_t subansatz_basis_count(const SubAnsatz &sa) {
    uint64_t total = 1;
    for (const auto &f : sa.fragments) {
        uint64_t c = binomial(f.size, f.weight);
        if (c != 0 && total > ~uint64_t{0} / c) {
            throw std::overflow_error("sub-ansatz basis count exceeds 64 bits");
        }
        total *= c;
    }
    return total;
}

SubspaceEnumerator::SubspaceEnumerator(const SubAnsatz &sa) : SubspaceEnumerator(sa.root.n, sa.fragments) {}

SubspaceEnumerator::SubspaceEnumerator(int num_qubits, std::vector<Fragment> fragments)
    : num_qubits_(num_qubits), fragments_(std::move(fragments)) {
    current_.resize(fragments_.size());
    for (size_t i = 0; i < fragments_.size(); i++) {
        const auto &f = fragments_[i];
        if (f.weight < 0 || f.weight > f.size) {
            done_ = true;
        }
        current_[i] = first_combination(f.weight);
    }
}

uint64_t SubspaceEnumerator::compose() const {
    uint64_t bits = 0;
    for (size_t i = 0; i < fragments_.size(); i++) {
        bits |= current_[i] << fragments_[i].offset;
    }
    return bits;
}

std::optional<BasisState> SubspaceEnumerator::next() {
    if (done_) {
        return std::nullopt;
    }
    if (!started_) {
        started_ = true;
        return BasisState(num_qubits_, compose());
    }
    for (size_t pos = fragments_.size(); pos-- > 0;) {
        const auto &f = fragments_[pos];
        uint64_t last = low_mask(f.weight) << (f.size - f.weight);
        if (current_[pos] != last) {
            current_[pos] = next_combination(current_[pos]);
            return BasisState(num_qubits_, compose());
        }
        current_[pos] = first_combination(f.weight);
    }
    done_ = true;
    return std::nullopt;
}

std::vector<BasisState> enumerate_subansatz(const SubAnsatz &sa) {
    std::vector<BasisState> out;
    SubspaceEnumerator it(sa);
    while (auto b = it.next()) {
        out.push_back(*b);
    }
    return out;
}

int level1_index(const BasisState &b) {
    int n = b.num_qubits();
    int lower = n - n / 2;
    return popcount(b.bits() >> lower);
}

Circuit fragment_circuit(const Fragment &f) { return dicke_circuit(f.spec()); }

std::vector<BasisState> run_subansatz(const SubAnsatz &sa, const std::vector<ParameterVector> &params, int shots,
                                      uint64_t seed) {
    if (shots < 1) {
        throw std::invalid_argument("run_subansatz needs at least one shot");
    }
    if (params.size() != sa.fragments.size()) {
        throw std::invalid_argument("expected one parameter vector per fragment (" +
                                    std::to_string(sa.fragments.size()) + "), got " + std::to_string(params.size()));
    }
    std::vector<Sampler> samplers;
    samplers.reserve(sa.fragments.size());
    for (size_t i = 0; i < sa.fragments.size(); i++) {
        const auto &f = sa.fragments[i];
        if (f.size > kMaxStateQubits) {
            throw std::invalid_argument("fragment of " + std::to_string(f.size) + " qubits is too large to simulate");
        }
        samplers.emplace_back(simulate(fragment_circuit(f), params[i]));
    }
    std::mt19937_64 rng(seed);
    std::vector<BasisState> out;
    out.reserve(static_cast<size_t>(shots));
    for (int s = 0; s < shots; s++) {
        uint64_t bits = 0;
        for (size_t i = 0; i < samplers.size(); i++) {
            bits |= samplers[i].draw(rng) << sa.fragments[i].offset;
        }
        out.emplace_back(sa.root.n, bits);
    }
    return out;
}

double entanglement_entropy(std::complex<double> a, std::complex<double> b) {
    double pa = std::norm(a);
    double pb = std::norm(b);
    if (std::abs(pa + pb - 1.0) > 1e-9) {
        throw std::invalid_argument("amplitudes must satisfy |a|^2 + |b|^2 = 1");
    }
    auto term = [](double p) { return p > 0 ? -p * std::log2(p) : 0.0; };
    return term(pa) + term(pb);
}

double loose_bound_product(int n, int p) {
    double acc = 1;
    for (int i = 1; i <= p; i++) {
        acc *= std::pow(static_cast<double>(n) / std::ldexp(1.0, i), std::ldexp(1.0, i - 1));
    }
    return acc;
}

double loose_bound_closed(int n, int p) {
    double num = std::pow(static_cast<double>(n), std::ldexp(1.0, p) - 1);
    return num / std::ldexp(1.0, (p - 1) * (1 << p) + 1);
}

}  // namespace dickevqe
