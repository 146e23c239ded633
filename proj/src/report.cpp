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

#include "d2lab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "d2lab/errors.hpp"
#include "d2lab/postselect.hpp"
#include "json.hpp"

#ifndef D2LAB_GIT_DESCRIBE
#define D2LAB_GIT_DESCRIBE "unknown"
#endif

namespace d2lab {

namespace {

using json = nlohmann::ordered_json;

std::string opt_str(const std::optional<double> &v) { return v ? format_double(*v) : ""; }

json opt_json(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

json num_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// CSV fields here never contain quotes; quote only when a comma appears.
std::string csv_field(const std::string &s) {
    return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
}

void provenance_lines(std::ostream &out, const ExperimentReport &r) {
    out << "# d2lab " << git_describe() << " schema=" << kReportSchemaVersion << "\n";
    out << "# experiment=" << r.id << " kind=" << r.kind << " engine=" << r.engine << " shots=" << r.shots
        << " seed=" << r.seed << " case=" << r.noise_case << " noiseless=" << (r.noiseless ? 1 : 0) << "\n";
    out << "# device=" << r.device_name << " device_hash=" << r.device_hash << "\n";
    out << "# shots are per measurement setting\n";
    for (const auto &w : r.warnings) out << "# warning: " << w << "\n";
}

json ptm_json(const PTM &p) {
    auto labels = pauli_labels(p.num_qubits());
    json rows = json::array();
    for (Eigen::Index i = 0; i < p.r.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < p.r.cols(); ++j) row.push_back(p.r(i, j));
        rows.push_back(row);
    }
    return json{{"row_labels", labels}, {"column_labels", labels}, {"rows", rows}};
}

json expectation_json(const std::string &label, const ExpectationValue &ev) {
    return json{{"label", label},       {"value", ev.value},       {"two_sigma", ev.two_sigma},
                {"ps_rate", ev.ps_rate}, {"n_pass", ev.n_pass},     {"n_total", ev.n_total},
                {"exact", ev.exact},    {"empty", ev.empty}};
}

// ---- SVG ----

std::string fmt(double v, int prec = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '&':
                out += "&amp;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

class Svg {
   public:
    Svg(double w, double h) : w_(w), h_(h) {}

    void frame(double x0, double x1, double y0, double y1, const std::string &xlabel, const std::string &ylabel,
               const std::string &title) {
        x0_ = x0, x1_ = x1, y0_ = y0, y1_ = y1;
        body_ << "<rect x=\"" << fmt(left_) << "\" y=\"" << fmt(top_) << "\" width=\"" << fmt(pw()) << "\" height=\""
              << fmt(ph()) << "\" fill=\"none\" stroke=\"#333\"/>\n";
        text(w_ / 2, 20, title, "middle", 14);
        text(w_ / 2, h_ - 8, xlabel, "middle");
        body_ << "<text x=\"14\" y=\"" << fmt(top_ + ph() / 2) << "\" font-size=\"12\" text-anchor=\"middle\" "
              << "transform=\"rotate(-90 14 " << fmt(top_ + ph() / 2) << ")\">" << escape(ylabel) << "</text>\n";
        for (int k = 0; k <= 4; ++k) {
            double yv = y0 + (y1 - y0) * k / 4;
            line(x0, yv, x1, yv, "#ddd");
            text(left_ - 6, Y(yv) + 4, fmt(yv, 2), "end", 10);
            double xv = x0 + (x1 - x0) * k / 4;
            text(X(xv), top_ + ph() + 16, fmt(xv, 2), "middle", 10);
        }
    }

    double X(double v) const { return left_ + (v - x0_) / (x1_ - x0_) * pw(); }
    double Y(double v) const { return top_ + (y1_ - v) / (y1_ - y0_) * ph(); }

    void line(double xa, double ya, double xb, double yb, const std::string &color, double width = 1) {
        body_ << "<line x1=\"" << fmt(X(xa)) << "\" y1=\"" << fmt(Y(ya)) << "\" x2=\"" << fmt(X(xb)) << "\" y2=\""
              << fmt(Y(yb)) << "\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width, 1) << "\"/>\n";
    }

    void polyline(const std::vector<std::pair<double, double>> &pts, const std::string &color,
                  const std::string &dash = "") {
        body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
        if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
        body_ << " points=\"";
        for (size_t k = 0; k < pts.size(); ++k) {
            body_ << (k ? " " : "") << fmt(X(pts[k].first)) << "," << fmt(Y(pts[k].second));
        }
        body_ << "\"/>\n";
        for (const auto &[x, y] : pts) {
            body_ << "<circle cx=\"" << fmt(X(x)) << "\" cy=\"" << fmt(Y(y)) << "\" r=\"2.5\" fill=\"" << color
                  << "\"/>\n";
        }
    }

    void bar(double x, double width, double y, const std::string &color) {
        double ya = Y(std::max(y, 0.0)), yb = Y(std::min(y, 0.0));
        body_ << "<rect x=\"" << fmt(X(x - width / 2)) << "\" y=\"" << fmt(ya) << "\" width=\""
              << fmt(X(x + width / 2) - X(x - width / 2)) << "\" height=\"" << fmt(yb - ya) << "\" fill=\"" << color
              << "\"/>\n";
    }

    void rect_px(double x, double y, double w, double h, const std::string &color) {
        body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
              << "\" fill=\"" << color << "\"/>\n";
    }

    void text(double x, double y, const std::string &s, const std::string &anchor = "start", int size = 12) {
        body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\"" << size << "\" text-anchor=\""
              << anchor << "\">" << escape(s) << "</text>\n";
    }

    void legend(const std::vector<std::pair<std::string, std::string>> &items) {
        double y = top_ + 14;
        for (const auto &[name, color] : items) {
            body_ << "<rect x=\"" << fmt(left_ + pw() + 10) << "\" y=\"" << fmt(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
                  << color << "\"/>\n";
            text(left_ + pw() + 24, y, name, "start", 11);
            y += 16;
        }
    }

    void write(std::ostream &out) const {
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w_, 0) << "\" height=\"" << fmt(h_, 0)
            << "\" viewBox=\"0 0 " << fmt(w_, 0) << " " << fmt(h_, 0) << "\" font-family=\"sans-serif\">\n"
            << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
            << body_.str() << "</svg>\n";
    }

   private:
    double pw() const { return w_ - left_ - right_; }
    double ph() const { return h_ - top_ - bottom_; }

    double w_, h_;
    double left_ = 60, right_ = 140, top_ = 36, bottom_ = 44;
    double x0_ = 0, x1_ = 1, y0_ = 0, y1_ = 1;
    std::ostringstream body_;
};

void svg_state(std::ostream &out, const ExperimentReport &r) {
    std::vector<const ObservableRow *> rows;
    for (const auto &o : r.observables)
        if (o.label.find_first_not_of('I') != std::string::npos) rows.push_back(&o);
    Svg s(std::max(420.0, 60.0 + 140 + 28.0 * double(rows.size())), 320);
    s.frame(0, double(std::max<size_t>(rows.size(), 1)), -1.05, 1.05, "Pauli observable", "expectation",
            r.id + " (" + r.engine + ")");
    for (size_t k = 0; k < rows.size(); ++k) {
        const auto &ev = rows[k]->ev;
        const double x = double(k) + 0.5;
        s.bar(x, 0.7, ev.value, kPalette[0]);
        if (ev.two_sigma > 0) s.line(x, ev.value - ev.two_sigma, x, ev.value + ev.two_sigma, "#000");
        s.text(s.X(x), s.Y(-1.05) - 4, rows[k]->label, "middle", 10);
    }
    std::vector<std::pair<std::string, std::string>> legend;
    for (const auto &m : r.metrics) {
        if (m.name == "fidelity" || m.name == "ps_rate" || m.name == "chsh_u1_plus_u2") {
            legend.push_back({m.name + " = " + fmt(m.value, 4), "#fff"});
        }
    }
    s.legend(legend);
    s.write(out);
}

void svg_scan(std::ostream &out, const ExperimentReport &r) {
    Svg s(640, 360);
    const double pi = std::numbers::pi;
    s.frame(-pi, pi, -1.05, 1.05, "theta (rad)", "value", r.id + " (" + r.engine + ")");
    const char *labels[] = {"X", "Y", "Z"};
    std::vector<std::pair<std::string, std::string>> legend;
    for (int k = 0; k < 3; ++k) {
        std::vector<std::pair<double, double>> pts;
        for (const auto &p : r.scan) {
            auto it = p.es.entries.find(labels[k]);
            if (it != p.es.entries.end() && !it->second.empty) pts.push_back({p.theta, it->second.value});
        }
        s.polyline(pts, kPalette[k]);
        legend.push_back({std::string("<") + labels[k] + "_L>", kPalette[k]});
    }
    std::vector<std::pair<double, double>> fid;
    for (const auto &p : r.scan)
        if (std::isfinite(p.fidelity)) fid.push_back({p.theta, p.fidelity});
    s.polyline(fid, "#000", "4 3");
    legend.push_back({"fidelity", "#000"});
    s.legend(legend);
    s.write(out);
}

void svg_ptm(std::ostream &out, const ExperimentReport &r) {
    const PTM &p = r.ptm ? *r.ptm : *r.ptm_raw;
    auto labels = pauli_labels(p.num_qubits());
    const double n = double(labels.size());
    const double cell = p.num_qubits() == 1 ? 48 : 24;
    const double w = 80 + cell * n + 40, h = 60 + cell * n + 20;
    std::ostringstream body;
    body << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w, 0) << "\" height=\"" << fmt(h, 0)
         << "\" font-family=\"sans-serif\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    body << "<text x=\"" << fmt(w / 2) << "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">" << escape(r.id)
         << " LPTM</text>\n";
    for (size_t i = 0; i < labels.size(); ++i) {
        body << "<text x=\"74\" y=\"" << fmt(50 + cell * (double(i) + 0.6)) << "\" font-size=\"10\" text-anchor=\"end\">"
             << labels[i] << "</text>\n";
        body << "<text x=\"" << fmt(80 + cell * (double(i) + 0.5)) << "\" y=\"46\" font-size=\"10\" text-anchor=\"middle\">"
             << labels[i] << "</text>\n";
        for (size_t j = 0; j < labels.size(); ++j) {
            const double v = std::clamp(p.r(Eigen::Index(i), Eigen::Index(j)), -1.0, 1.0);
            const int shade = int(std::lround(255 * (1 - std::abs(v))));
            char color[8];
            std::snprintf(color, sizeof color, v >= 0 ? "#ff%02x%02x" : "#%02x%02xff", shade, shade);
            body << "<rect x=\"" << fmt(80 + cell * double(j)) << "\" y=\"" << fmt(50 + cell * double(i))
                 << "\" width=\"" << fmt(cell) << "\" height=\"" << fmt(cell) << "\" fill=\"" << color
                 << "\" stroke=\"#eee\"/>\n";
        }
    }
    body << "</svg>\n";
    out << body.str();
}

void svg_table(std::ostream &out, const ExperimentReport &r) {
    Svg s(std::max(480.0, 60.0 + 140 + 48.0 * double(r.metrics.size())), 340);
    double lo = 1;
    for (const auto &m : r.metrics) lo = std::min(lo, m.value);
    lo = std::max(0.0, std::floor(lo * 20 - 1) / 20);
    s.frame(0, double(std::max<size_t>(r.metrics.size(), 1)), lo, 1.0, "gate", "fidelity", r.id + " (" + r.engine + ")");
    for (size_t k = 0; k < r.metrics.size(); ++k) {
        const auto &m = r.metrics[k];
        const double x = double(k) + 0.5;
        // Bars start at the bottom of the axis rather than at zero.
        s.rect_px(s.X(x - 0.35), s.Y(m.value), s.X(x + 0.35) - s.X(x - 0.35), s.Y(lo) - s.Y(m.value), kPalette[k % 6]);
        if (m.two_sigma && *m.two_sigma > 0) s.line(x, m.value - *m.two_sigma, x, m.value + *m.two_sigma, "#000");
        s.text(s.X(x), s.Y(lo) + 30, m.name, "middle", 9);
    }
    s.write(out);
}

template <class F>
std::string write_file(const std::filesystem::path &path, F &&writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    writer(out);
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
    return path.string();
}

void ensure_dir(const std::string &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir + "'" + (ec ? ": " + ec.message() : ""));
    }
}

void check_formats(const std::vector<std::string> &formats) {
    for (const auto &f : formats) {
        if (f != "csv" && f != "json" && f != "svg") {
            throw std::invalid_argument("unknown output format '" + f + "' (csv, json, svg)");
        }
    }
}

bool wants(const std::vector<std::string> &formats, const char *f) {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
}

}  // namespace

const char *git_describe() { return D2LAB_GIT_DESCRIBE; }

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string slug(const std::string &id) {
    std::string s;
    for (char c : id) {
        const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
        s += keep ? c : '_';
    }
    while (!s.empty() && s.back() == '_') s.pop_back();
    return s.empty() ? "report" : s;
}

void write_report_csv(std::ostream &out, const ExperimentReport &r) {
    provenance_lines(out, r);
    out << "section,name,setting,value,two_sigma,ps_rate,ps_rate_2sigma,n_pass,n_total,exact\n";
    for (const auto &o : r.observables) {
        const auto &e = o.ev;
        out << "observable," << o.label << "," << setting_for(o.label) << ","
            << (e.empty ? "" : format_double(e.value)) << "," << (e.empty ? "" : format_double(e.two_sigma)) << ","
            << format_double(e.ps_rate) << ",," << format_double(e.n_pass) << "," << format_double(e.n_total) << ","
            << (e.exact ? 1 : 0) << "\n";
    }
    for (const auto &s : r.settings) {
        out << "setting," << csv_field(s.tag) << "," << s.setting << ",,," << format_double(s.ps_rate) << ","
            << opt_str(s.ps_rate_2sigma) << "," << format_double(s.n_pass) << "," << format_double(s.n_total) << ","
            << (s.exact ? 1 : 0) << "\n";
    }
    for (const auto &p : r.scan) {
        for (const auto &[label, e] : p.es.entries) {
            if (label.find_first_not_of('I') == std::string::npos) continue;
            out << "scan," << label << "," << format_double(p.theta) << "," << (e.empty ? "" : format_double(e.value))
                << "," << (e.empty ? "" : format_double(e.two_sigma)) << "," << format_double(e.ps_rate) << ",,"
                << format_double(e.n_pass) << "," << format_double(e.n_total) << "," << (e.exact ? 1 : 0) << "\n";
        }
        out << "scan,fidelity," << format_double(p.theta) << "," << format_double(p.fidelity) << ",,"
            << format_double(p.ps_rate) << ",,,,\n";
    }
    for (const auto &m : r.metrics) {
        out << "metric," << csv_field(m.name) << ",," << format_double(m.value) << "," << opt_str(m.two_sigma)
            << ",,,,,\n";
    }
}

void write_summary_csv(std::ostream &out, const ExperimentReport &r) {
    provenance_lines(out, r);
    out << "name,fidelity,two_sigma,formatted\n";
    auto row = [&](const std::string &name, const Metric &m) {
        out << csv_field(name) << "," << format_double(m.value) << "," << opt_str(m.two_sigma) << ","
            << format_uncertain(m.value, m.two_sigma) << "\n";
    };
    if (r.kind == "table") {
        for (const auto &m : r.metrics) row(m.name, m);
    } else if (const Metric *m = r.metric(r.kind == "lptm" ? "gate_fidelity" : "fidelity")) {
        row(r.id, *m);
    } else if (r.kind == "scan") {
        for (const auto &p : r.scan) row(r.id.substr(0, r.id.find('(')) + "(" + format_double(p.theta) + ")",
                                         Metric{"", p.fidelity, std::nullopt});
    }
}

void write_report_json(std::ostream &out, const ExperimentReport &r) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["provenance"] = json{{"tool", "d2lab"},
                           {"git_describe", git_describe()},
                           {"experiment", r.id},
                           {"kind", r.kind},
                           {"engine", r.engine},
                           {"shots_per_setting", r.shots},
                           {"seed", r.seed},
                           {"noise_case", r.noise_case},
                           {"noiseless", r.noiseless},
                           {"device", json{{"name", r.device_name}, {"hash", r.device_hash}}}};
    json obs = json::array();
    for (const auto &o : r.observables) obs.push_back(expectation_json(o.label, o.ev));
    j["observables"] = obs;
    json settings = json::array();
    for (const auto &s : r.settings) {
        settings.push_back(json{{"tag", s.tag},
                                {"setting", s.setting},
                                {"ps_rate", s.ps_rate},
                                {"ps_rate_2sigma", opt_json(s.ps_rate_2sigma)},
                                {"n_pass", s.n_pass},
                                {"n_total", s.n_total},
                                {"exact", s.exact}});
    }
    j["settings"] = settings;
    json metrics = json::array();
    for (const auto &m : r.metrics) {
        metrics.push_back(json{{"name", m.name}, {"value", num_json(m.value)}, {"two_sigma", opt_json(m.two_sigma)}});
    }
    j["metrics"] = metrics;
    if (r.rho) {
        json data = json::array();
        for (Eigen::Index a = 0; a < r.rho->rows(); ++a)
            for (Eigen::Index b = 0; b < r.rho->cols(); ++b)
                data.push_back(json::array({(*r.rho)(a, b).real(), (*r.rho)(a, b).imag()}));
        j["density_matrix"] = json{{"dim", r.rho->rows()}, {"order", "row-major [re, im]"}, {"data", data}};
    }
    if (r.ptm_raw) j["ptm_raw"] = ptm_json(*r.ptm_raw);
    if (r.ptm) j["ptm"] = ptm_json(*r.ptm);
    if (!r.scan.empty()) {
        json scan = json::array();
        for (const auto &p : r.scan) {
            json exps = json::array();
            for (const auto &[l, e] : p.es.entries) exps.push_back(expectation_json(l, e));
            scan.push_back(json{{"theta", p.theta},
                                {"fidelity", num_json(p.fidelity)},
                                {"ps_rate", p.ps_rate},
                                {"expectations", exps}});
        }
        j["scan"] = scan;
    }
    j["warnings"] = r.warnings;
    j["artifacts"] = r.artifacts;
    out << j.dump(2) << "\n";
}

void write_report_svg(std::ostream &out, const ExperimentReport &r) {
    if (r.kind == "scan") {
        svg_scan(out, r);
    } else if (r.kind == "lptm" && (r.ptm || r.ptm_raw)) {
        svg_ptm(out, r);
    } else if (r.kind == "table") {
        svg_table(out, r);
    } else {
        svg_state(out, r);
    }
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepResult> &sweeps) {
    out << "# d2lab " << git_describe() << " schema=" << kReportSchemaVersion << "\n";
    for (const auto &s : sweeps) {
        out << "# sweep mode=" << noise_mode_name(s.config.mode) << " shots=" << s.config.shots
            << " seed=" << s.config.seed << " device=uniform";
        for (const auto &c : s.curves) out << " crossing[" << c.family << "]=" << (c.crossing ? format_double(*c.crossing) : "none");
        out << "\n";
        for (const auto &w : s.warnings) out << "# warning: " << w << "\n";
    }
    out << "mode,family,p,logical_error,logical_2sigma,ps_rate,n_pass,n_total,physical_error,physical_2sigma,"
           "excluded\n";
    for (const auto &s : sweeps) {
        for (const auto &c : s.curves) {
            for (const auto &p : c.points) {
                out << noise_mode_name(s.config.mode) << "," << c.family << "," << format_double(p.p) << ","
                    << (p.excluded ? "" : format_double(p.logical_error)) << "," << opt_str(p.logical_2sigma) << ","
                    << format_double(p.ps_rate) << "," << format_double(p.n_pass) << "," << format_double(p.n_total)
                    << "," << format_double(p.physical_error) << "," << opt_str(p.physical_2sigma) << ","
                    << (p.excluded ? 1 : 0) << "\n";
            }
        }
    }
}

void write_sweep_json(std::ostream &out, const std::vector<SweepResult> &sweeps) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["provenance"] = json{{"tool", "d2lab"}, {"git_describe", git_describe()}};
    json arr = json::array();
    for (const auto &s : sweeps) {
        json curves = json::array();
        for (const auto &c : s.curves) {
            json pts = json::array();
            for (const auto &p : c.points) {
                pts.push_back(json{{"p", p.p},
                                   {"logical_error", p.excluded ? json(nullptr) : json(p.logical_error)},
                                   {"logical_2sigma", opt_json(p.logical_2sigma)},
                                   {"ps_rate", p.ps_rate},
                                   {"n_pass", p.n_pass},
                                   {"n_total", p.n_total},
                                   {"physical_error", p.physical_error},
                                   {"physical_2sigma", opt_json(p.physical_2sigma)},
                                   {"excluded", p.excluded}});
            }
            curves.push_back(json{{"family", c.family}, {"crossing", opt_json(c.crossing)}, {"points", pts}});
        }
        arr.push_back(json{{"mode", noise_mode_name(s.config.mode)},
                           {"shots", s.config.shots},
                           {"seed", s.config.seed},
                           {"curves", curves},
                           {"warnings", s.warnings}});
    }
    j["sweeps"] = arr;
    out << j.dump(2) << "\n";
}

void write_sweep_svg(std::ostream &out, const std::vector<SweepResult> &sweeps) {
    double pmax = 0, emax = 0;
    for (const auto &s : sweeps)
        for (const auto &c : s.curves)
            for (const auto &p : c.points) {
                pmax = std::max(pmax, p.p);
                emax = std::max({emax, p.physical_error, p.excluded ? 0.0 : p.logical_error});
            }
    Svg svg(680, 400);
    svg.frame(0, pmax > 0 ? pmax : 1, 0, emax > 0 ? emax * 1.05 : 1, "p", "error rate", "logical vs physical error");
    std::vector<std::pair<std::string, std::string>> legend;
    size_t k = 0;
    for (const auto &s : sweeps) {
        for (const auto &c : s.curves) {
            const std::string color = kPalette[k++ % 6];
            std::vector<std::pair<double, double>> lo, ph;
            for (const auto &p : c.points) {
                if (!p.excluded) lo.push_back({p.p, p.logical_error});
                ph.push_back({p.p, p.physical_error});
            }
            svg.polyline(lo, color);
            svg.polyline(ph, color, "4 3");
            const std::string name = std::string(noise_mode_name(s.config.mode)) + " " + c.family;
            legend.push_back({name + " logical", color});
            legend.push_back({name + " physical (dashed)", color});
            if (c.crossing) svg.line(*c.crossing, 0, *c.crossing, emax * 1.05, color, 0.5);
        }
    }
    svg.legend(legend);
    svg.write(out);
}

std::vector<std::string> emit_report(const ExperimentReport &r, const std::string &dir,
                                     const std::vector<std::string> &formats) {
    check_formats(formats);
    ensure_dir(dir);
    const std::filesystem::path base = std::filesystem::path(dir) / slug(r.id);
    std::vector<std::string> paths;
    auto with = [&](const std::string &suffix) { return base.string() + suffix; };
    if (wants(formats, "csv")) {
        paths.push_back(write_file(with(".csv"), [&](std::ostream &o) { write_report_csv(o, r); }));
        paths.push_back(write_file(with("_summary.csv"), [&](std::ostream &o) { write_summary_csv(o, r); }));
    }
    if (wants(formats, "svg")) {
        paths.push_back(write_file(with(".svg"), [&](std::ostream &o) { write_report_svg(o, r); }));
    }
    if (wants(formats, "json")) {
        // The JSON lists every artifact, itself included, by file name so that
        // its bytes do not depend on the output directory.
        ExperimentReport copy = r;
        for (const auto &p : paths) copy.artifacts.push_back(std::filesystem::path(p).filename().string());
        copy.artifacts.push_back(base.filename().string() + ".json");
        paths.push_back(write_file(with(".json"), [&](std::ostream &o) { write_report_json(o, copy); }));
    }
    return paths;
}

std::vector<std::string> emit_sweep(const std::vector<SweepResult> &sweeps, const std::string &dir,
                                    const std::string &stem, const std::vector<std::string> &formats) {
    check_formats(formats);
    ensure_dir(dir);
    const std::string base = (std::filesystem::path(dir) / slug(stem)).string();
    std::vector<std::string> paths;
    if (wants(formats, "csv"))
        paths.push_back(write_file(base + ".csv", [&](std::ostream &o) { write_sweep_csv(o, sweeps); }));
    if (wants(formats, "json"))
        paths.push_back(write_file(base + ".json", [&](std::ostream &o) { write_sweep_json(o, sweeps); }));
    if (wants(formats, "svg"))
        paths.push_back(write_file(base + ".svg", [&](std::ostream &o) { write_sweep_svg(o, sweeps); }));
    return paths;
}

}  // namespace d2lab
