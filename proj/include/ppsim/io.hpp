#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ppsim/approx.hpp"
#include "ppsim/estimate.hpp"
#include "ppsim/hawkes.hpp"
#include "ppsim/inar.hpp"
#include "ppsim/kernel.hpp"
#include "ppsim/types.hpp"

namespace ppsim::io {

// Shortest decimal string that parses back to exactly the same double.
[[nodiscard]] std::string fmt_double(double v);

// Kernel <-> JSON: {"family":"exponential","a":..,"b":..},
// {"family":"step","c":..,"w":..}, {"family":"table","knots":[[t,h],...]}.
[[nodiscard]] nlohmann::json kernel_to_json(const ReproductionKernel& kernel);
[[nodiscard]] ReproductionKernel kernel_from_json(const nlohmann::json& j);

// Model document {"eta":..., "kernel":{...}, "delta":...}.
[[nodiscard]] nlohmann::json model_to_json(double eta, const ReproductionKernel& kernel,
                                           double delta);
struct ModelDoc {
    double eta = 0.0;
    ReproductionKernel kernel = ReproductionKernel::exponential(0.0, 1.0);
    double delta = 0.0;
};
[[nodiscard]] ModelDoc model_from_json(const nlohmann::json& j);

// CSV writers; headers always emitted, '.' decimal, '\n' line endings.
void write_csv(std::ostream& os, const CountSeries& series);            // index,count
void write_csv(std::ostream& os, const PointPattern& pattern);          // time
void write_csv(std::ostream& os, const hawkes::ClusterRealization& c);  // time,parent_index,generation
void write_csv(std::ostream& os, const inar::FamilyRealization& f);     // n,generation,count
void write_csv(std::ostream& os, const approx::ConvergenceReport& r);
[[nodiscard]] nlohmann::json report_to_json(const approx::ConvergenceReport& r);
void write_csv(std::ostream& os, const estimate::KernelEstimate& e);    // k,t,h_hat
[[nodiscard]] nlohmann::json estimate_header_json(const estimate::KernelEstimate& e);

// CSV readers for the two series formats above.
[[nodiscard]] CountSeries read_count_series_csv(std::istream& is);
[[nodiscard]] std::vector<double> read_times_csv(std::istream& is);

// Write-then-rename so output files appear atomically. Throws IoError.
void atomic_write(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& writer);

[[nodiscard]] std::string read_file(const std::filesystem::path& path);

}  // namespace ppsim::io
