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

#include "dickevqe/circuit.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dickevqe {

DickeSpec::DickeSpec(int n_, int k_) : n(n_), k(k_) {
    if (n_ < 1) {
        throw std::invalid_argument("Dicke state needs at least one qubit");
    }
    if (k_ < 0 || k_ > n_) {
        throw std::invalid_argument("Dicke weight k=" + std::to_string(k_) + " outside [0, " + std::to_string(n_) + "]");
    }
}

const char *structure_name(Structure s) {
    switch (s) {
        case Structure::Straight:
            return "straight";
        case Structure::Folded:
            return "folded";
        case Structure::Conjugate:
            return "conjugate";
    }
    return "?";
}

Structure parse_structure(const std::string &name) {
    if (name == "straight") {
        return Structure::Straight;
    }
    if (name == "folded") {
        return Structure::Folded;
    }
    if (name == "conjugate") {
        return Structure::Conjugate;
    }
    throw std::invalid_argument("unknown circuit structure '" + name + "'");
}

int Circuit::num_slots() const {
    int m = 0;
    for (const auto &b : blocks) {
        m = std::max(m, b.slot + 1);
    }
    return m;
}

void write_circuit(std::ostream &out, const Circuit &c) {
    out << c.n << ' ' << c.k << ' ' << structure_name(c.structure) << '\n';
    for (int q : c.initial_x) {
        out << "x " << q << '\n';
    }
    for (const auto &b : c.blocks) {
        out << b.upper << ' ' << b.lower << ' ' << b.slot << '\n';
    }
    for (int q : c.final_x) {
        out << "xf " << q << '\n';
    }
}

std::string circuit_to_string(const Circuit &c) {
    std::ostringstream ss;
    write_circuit(ss, c);
    return ss.str();
}

Circuit parse_circuit(std::istream &in) {
    Circuit c;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("circuit text is empty");
    }
    {
        std::istringstream hs(line);
        std::string tag;
        if (!(hs >> c.n >> c.k >> tag)) {
            throw std::invalid_argument("bad circuit header: '" + line + "'");
        }
        c.structure = parse_structure(tag);
    }
    int line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string first;
        ls >> first;
        auto fail = [&] { throw std::invalid_argument("bad circuit line " + std::to_string(line_no) + ": '" + line + "'"); };
        if (first == "x" || first == "xf") {
            int q;
            if (!(ls >> q) || q < 0 || q >= c.n) {
                fail();
            }
            (first == "x" ? c.initial_x : c.final_x).push_back(q);
        } else {
            Block b;
            try {
                b.upper = std::stoi(first);
            } catch (const std::exception &) {
                fail();
            }
            if (!(ls >> b.lower >> b.slot) || b.upper != b.lower + 1 || b.lower < 0 || b.upper >= c.n || b.slot < 0) {
                fail();
            }
            c.blocks.push_back(b);
        }
    }
    return c;
}

}  // namespace dickevqe
