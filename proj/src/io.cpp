#include "ppsim/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ppsim/errors.hpp"

namespace ppsim::io {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

json kernel_to_json(const ReproductionKernel& kernel) {
    json j;
    if (const auto* e = std::get_if<ExponentialKernel>(&kernel.family())) {
        j["family"] = "exponential";
        j["a"] = e->scale;
        j["b"] = e->decay;
    } else if (const auto* s = std::get_if<StepKernel>(&kernel.family())) {
        j["family"] = "step";
        j["c"] = s->height;
        j["w"] = s->width;
    } else {
        const auto& knots = std::get<TableKernel>(kernel.family()).knots;
        j["family"] = "table";
        auto arr = json::array();
        for (const auto& [t, h] : knots) arr.push_back(json::array({t, h}));
        j["knots"] = std::move(arr);
    }
    return j;
}

ReproductionKernel kernel_from_json(const json& j) {
    try {
        const std::string family = j.at("family").get<std::string>();
        if (family == "exponential")
            return ReproductionKernel::exponential(j.at("a").get<double>(), j.at("b").get<double>());
        if (family == "step")
            return ReproductionKernel::step(j.at("c").get<double>(), j.at("w").get<double>());
        if (family == "table") {
            std::vector<std::pair<double, double>> knots;
            for (const auto& row : j.at("knots"))
                knots.emplace_back(row.at(0).get<double>(), row.at(1).get<double>());
            return ReproductionKernel::table(std::move(knots));
        }
        throw ConfigInvalid("kernel: unknown family '" + family + "'");
    } catch (const json::exception& e) {
        throw ConfigInvalid(std::string("kernel: ") + e.what());
    }
}

json model_to_json(double eta, const ReproductionKernel& kernel, double delta) {
    return json{{"eta", eta}, {"kernel", kernel_to_json(kernel)}, {"delta", delta}};
}

ModelDoc model_from_json(const json& j) {
    try {
        ModelDoc doc;
        doc.eta = j.at("eta").get<double>();
        doc.kernel = kernel_from_json(j.at("kernel"));
        doc.delta = j.at("delta").get<double>();
        return doc;
    } catch (const json::exception& e) {
        throw ConfigInvalid(std::string("model: ") + e.what());
    }
}

void write_csv(std::ostream& os, const CountSeries& series) {
    os << "index,count\n";
    for (std::size_t i = 0; i < series.counts.size(); ++i)
        os << series.start_index + static_cast<std::int64_t>(i) << ',' << series.counts[i] << '\n';
}

void write_csv(std::ostream& os, const PointPattern& pattern) {
    os << "time\n";
    for (double t : pattern.times) os << fmt_double(t) << '\n';
}

void write_csv(std::ostream& os, const hawkes::ClusterRealization& c) {
    os << "time,parent_index,generation\n";
    for (std::size_t i = 0; i < c.pattern.times.size(); ++i)
        os << fmt_double(c.pattern.times[i]) << ',' << c.parent_index[i] << ',' << c.generation[i]
           << '\n';
}

void write_csv(std::ostream& os, const inar::FamilyRealization& f) {
    os << "n,generation,count\n";
    for (std::size_t g = 0; g < f.per_generation.size(); ++g)
        for (std::size_t n = 0; n < f.per_generation[g].size(); ++n)
            if (f.per_generation[g][n] != 0)
                os << n << ',' << g << ',' << f.per_generation[g][n] << '\n';
}

void write_csv(std::ostream& os, const approx::ConvergenceReport& r) {
    os << "delta,k_delta,mean_gap,w1_window1,w1_window2,var_gap,reps\n";
    for (const auto& row : r.rows)
        os << fmt_double(row.delta) << ',' << fmt_double(row.k_delta) << ','
           << fmt_double(row.mean_gap) << ',' << fmt_double(row.w1_window1) << ','
           << fmt_double(row.w1_window2) << ',' << fmt_double(row.var_gap) << ',' << row.reps
           << '\n';
}

json report_to_json(const approx::ConvergenceReport& r) {
    auto rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back(json{{"delta", row.delta},
                            {"k_delta", row.k_delta},
                            {"mean_gap", row.mean_gap},
                            {"w1_window1", row.w1_window1},
                            {"w1_window2", row.w1_window2},
                            {"var_gap", row.var_gap},
                            {"reps", row.reps}});
    return json{{"target_rate", r.target_rate}, {"rows", std::move(rows)}};
}

void write_csv(std::ostream& os, const estimate::KernelEstimate& e) {
    os << "k,t,h_hat\n";
    for (std::size_t k = 1; k <= e.h_hat.size(); ++k)
        os << k << ',' << fmt_double(static_cast<double>(k) * e.delta) << ','
           << fmt_double(e.h_hat[k - 1]) << '\n';
}

json estimate_header_json(const estimate::KernelEstimate& e) {
    return json{{"delta", e.delta},
                {"eta_hat", e.eta_hat},
                {"residual_variance", e.residual_variance}};
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

std::string next_content_line(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) return line;
    }
    return {};
}

}  // namespace

CountSeries read_count_series_csv(std::istream& is) {
    if (next_content_line(is) != "index,count")
        throw IoError("count series CSV: expected header 'index,count'");
    CountSeries out;
    bool first = true;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != 2) throw IoError("count series CSV: malformed row '" + line + "'");
        char* end = nullptr;
        const std::int64_t idx = std::strtoll(cells[0].c_str(), &end, 10);
        const std::int64_t cnt = std::strtoll(cells[1].c_str(), &end, 10);
        if (cnt < 0) throw IoError("count series CSV: counts must be >= 0");
        if (first) {
            out.start_index = idx;
            first = false;
        }
        out.counts.push_back(cnt);
    }
    return out;
}

std::vector<double> read_times_csv(std::istream& is) {
    if (next_content_line(is) != "time")
        throw IoError("point pattern CSV: expected header 'time'");
    std::vector<double> times;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        times.push_back(std::strtod(line.c_str(), nullptr));
    }
    return times;
}

void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer) {
    namespace fs = std::filesystem;
    std::error_code ec;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir, ec);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw IoError("cannot open '" + tmp.string() + "' for writing");
        writer(os);
        os.flush();
        if (!os) throw IoError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace ppsim::io
