#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace randflight::cli {

//! Bad flags or config; maps to exit status 2.
class UsageError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! --help was given; the message is the help text.
class HelpRequested : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum ExitStatus
{
    exit_ok = 0,
    exit_failed = 1,
    exit_usage = 2,
    exit_numeric = 3
};

struct RunConfig
{
    std::string command;
    int m = 2;
    std::string law = "uniform";
    double k = 0;
    double lambda = 1;
    double c = 1;
    double t = 1;
    int K = 8;
    int nr = 64;
    int ntheta = 0;
    std::uint64_t n_samples = 1000000;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
    unsigned threads = 0;
    std::string suite = "all";
    std::vector<double> alpha;
};

//! Parse argv, merging an optional JSON config file (flags win).
RunConfig parse_args(int argc, const char* const* argv);

//! Check command-specific requirements; throws UsageError.
void validate_config(const RunConfig& config);

//! Execute a command, writing artifacts and the sidecar.
int run(const RunConfig& config, std::ostream& log);

//! Full entry point with exit-status mapping.
int main_entry(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

} // namespace randflight::cli
