// Copyright 2026 The d2lab Authors
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

#include "d2lab/device.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "d2lab/errors.hpp"
#include "d2lab_default_device.hpp"

namespace d2lab {

namespace {

namespace pt = boost::property_tree;

std::pair<std::string, std::string> sorted(const std::string &a, const std::string &b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::string trim(std::string_view s) {
    const auto lo = s.find_first_not_of(" \t\r\n");
    if (lo == std::string_view::npos) return "";
    const auto hi = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(lo, hi - lo + 1));
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::pair<std::string, std::string> parse_edge(const std::string &text, const std::string &where) {
    auto parts = split(text, '-');
    if (parts.size() != 2 || parts[0] == parts[1]) {
        throw ParseError(where + ": '" + text + "' is not a pair of the form qa-qb");
    }
    return {parts[0], parts[1]};
}

class Sections {
   public:
    Sections(const pt::ptree &root, std::string origin) : origin_(std::move(origin)) {
        for (const auto &[name, child] : root) {
            if (child.empty()) {
                throw ParseError(origin_ + ": key '" + name + "' outside of any section");
            }
            sections_[name] = &child;
        }
    }

    bool has(const std::string &section) const { return sections_.count(section) > 0; }
    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto &kv : sections_) out.push_back(kv.first);
        return out;
    }

    std::optional<std::string> find(const std::string &section, const std::string &key) const {
        auto it = sections_.find(section);
        if (it == sections_.end()) return std::nullopt;
        auto v = it->second->get_optional<std::string>(pt::ptree::path_type(key, '/'));
        if (!v) return std::nullopt;
        return trim(*v);
    }

    std::string text(const std::string &section, const std::string &key) const {
        auto v = find(section, key);
        if (!v || v->empty()) {
            throw ParseError(origin_ + ": missing field [" + section + "] " + key);
        }
        return *v;
    }

    double number(const std::string &section, const std::string &key) const {
        return to_number(section, key, text(section, key));
    }

    std::optional<double> optional_number(const std::string &section, const std::string &key) const {
        auto v = find(section, key);
        if (!v) return std::nullopt;
        return to_number(section, key, *v);
    }

    double probability(const std::string &section, const std::string &key) const {
        double v = number(section, key);
        if (v < 0 || v > 1) {
            throw ParseError(origin_ + ": [" + section + "] " + key + " = " + text(section, key) +
                             " is not a probability in [0, 1]");
        }
        return v;
    }

   private:
    double to_number(const std::string &section, const std::string &key, const std::string &s) const {
        double v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
            throw ParseError(origin_ + ": [" + section + "] " + key + " = '" + s + "' is not a number");
        }
        return v;
    }

    std::string origin_;
    std::map<std::string, const pt::ptree *> sections_;
};

std::string format_number(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

}  // namespace

bool DeviceParams::adjacent(const std::string &a, const std::string &b) const {
    for (const auto &[x, y] : edges)
        if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
}

double DeviceParams::cz(const std::string &a, const std::string &b) const {
    auto it = cz_fidelity.find(sorted(a, b));
    if (it == cz_fidelity.end()) {
        throw NoiseModelError("no CZ fidelity for pair " + a + "-" + b);
    }
    return it->second;
}

double DeviceParams::average_pm() const {
    double s = 0;
    for (const auto &q : qubits) s += 1 - (qubit.at(q).f00 + qubit.at(q).f11) / 2;
    return qubits.empty() ? 0 : s / double(qubits.size());
}

double DeviceParams::average_cz_fidelity() const {
    double s = 0;
    for (const auto &[k, v] : cz_fidelity) s += v;
    return cz_fidelity.empty() ? 0 : s / double(cz_fidelity.size());
}

NoiseModel DeviceParams::to_noise_model(bool symmetric_readout) const {
    NoiseModel nm;
    nm.symmetric_readout = symmetric_readout;
    for (const auto &q : qubits) {
        const auto &p = qubit.at(q);
        nm.p1[q] = p.gate_error_1q;
        nm.readout[q] = ReadoutFidelity{p.f00, p.f11};
    }
    for (const auto &[k, f] : cz_fidelity) nm.set_pair(k.first, k.second, 1 - f);
    nm.validate();
    return nm;
}

void DeviceParams::validate() const {
    if (qubits.empty()) {
        throw ParseError("device lists no qubits");
    }
    std::set<std::string> names(qubits.begin(), qubits.end());
    if (names.size() != qubits.size()) {
        throw ParseError("device lists a qubit twice");
    }
    for (const auto &q : qubits) {
        auto it = qubit.find(q);
        if (it == qubit.end()) {
            throw ParseError("missing section [qubit." + q + "]");
        }
        for (double v : {it->second.gate_error_1q, it->second.f00, it->second.f11}) {
            if (!(v >= 0 && v <= 1)) {
                throw ParseError("qubit " + q + " has a probability outside [0, 1]");
            }
        }
    }
    for (const auto &[a, b] : edges) {
        if (!names.count(a) || !names.count(b)) {
            throw ParseError("layout edge " + a + "-" + b + " names an unknown qubit");
        }
        if (!cz_fidelity.count(sorted(a, b))) {
            throw ParseError("missing section [pair." + a + "-" + b + "] cz_fidelity");
        }
    }
    for (const auto &[k, f] : cz_fidelity) {
        if (!adjacent(k.first, k.second)) {
            throw ParseError("pair " + k.first + "-" + k.second + " is not a layout edge");
        }
        if (!(f >= 0 && f <= 1)) {
            throw ParseError("pair " + k.first + "-" + k.second + " has a CZ fidelity outside [0, 1]");
        }
    }
}

std::string DeviceParams::canonical_text() const {
    std::ostringstream out;
    out << "name=" << name << "\nqubits=";
    for (size_t i = 0; i < qubits.size(); ++i) out << (i ? "," : "") << qubits[i];
    out << "\nedges=";
    for (size_t i = 0; i < edges.size(); ++i) out << (i ? "," : "") << edges[i].first << "-" << edges[i].second;
    out << "\n";
    for (const auto &q : qubits) {
        const auto &p = qubit.at(q);
        out << q << ":" << format_number(p.gate_error_1q) << "," << format_number(p.f00) << ","
            << format_number(p.f11) << "," << (p.t1_us ? format_number(*p.t1_us) : "-") << ","
            << (p.t2_us ? format_number(*p.t2_us) : "-") << "\n";
    }
    for (const auto &[k, f] : cz_fidelity) out << k.first << "-" << k.second << ":" << format_number(f) << "\n";
    return out.str();
}

std::string DeviceParams::hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

DeviceParams parse_device(const std::string &text, const std::string &origin) {
    pt::ptree root;
    std::istringstream in(text);
    try {
        pt::read_ini(in, root);
    } catch (const pt::ini_parser_error &e) {
        throw ParseError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
    }
    Sections sec(root, origin);

    DeviceParams d;
    d.qubits = split(sec.text("device", "qubits"), ',');
    d.name = sec.find("device", "name").value_or("device");
    for (const auto &e : split(sec.text("layout", "edges"), ',')) d.edges.push_back(parse_edge(e, origin + ": [layout] edges"));

    for (const auto &q : d.qubits) {
        const std::string s = "qubit." + q;
        QubitParams p;
        p.gate_error_1q = sec.probability(s, "gate_error_1q");
        p.f00 = sec.probability(s, "f00");
        p.f11 = sec.probability(s, "f11");
        p.t1_us = sec.optional_number(s, "t1_us");
        p.t2_us = sec.optional_number(s, "t2_us");
        d.qubit[q] = p;
    }
    for (const auto &[a, b] : d.edges) {
        for (const auto &q : {a, b}) {
            if (std::find(d.qubits.begin(), d.qubits.end(), q) == d.qubits.end()) {
                throw ParseError(origin + ": [layout] edge " + a + "-" + b + " names an unknown qubit");
            }
        }
        std::string s = "pair." + a + "-" + b;
        if (!sec.has(s) && sec.has("pair." + b + "-" + a)) s = "pair." + b + "-" + a;
        d.cz_fidelity[sorted(a, b)] = sec.probability(s, "cz_fidelity");
    }
    for (const auto &name : sec.names()) {
        if (name.rfind("pair.", 0) == 0) {
            auto [a, b] = parse_edge(name.substr(5), origin + ": [" + name + "]");
            if (!d.adjacent(a, b)) {
                throw ParseError(origin + ": [" + name + "] is not a layout edge");
            }
        } else if (name.rfind("qubit.", 0) == 0) {
            if (std::find(d.qubits.begin(), d.qubits.end(), name.substr(6)) == d.qubits.end()) {
                throw ParseError(origin + ": [" + name + "] is not listed in [device] qubits");
            }
        }
    }
    try {
        d.validate();
    } catch (const ParseError &e) {
        throw ParseError(origin + ": " + e.what());
    }
    return d;
}

DeviceParams load_device(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read device file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_device(buf.str(), path);
}

const char *default_device_ini() { return kDefaultDeviceIni; }

DeviceParams default_device() { return parse_device(kDefaultDeviceIni, "<bundled wukong_2x4.ini>"); }

}  // namespace d2lab
