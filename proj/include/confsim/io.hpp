#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "confsim/configuration.hpp"
#include "confsim/dynamics.hpp"
#include "confsim/gibbs.hpp"
#include "confsim/intensity.hpp"
#include "confsim/potential.hpp"
#include "confsim/verify.hpp"

namespace confsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 17 significant digits: doubles round-trip bit-exactly through the text form.
std::string format_double(double v);

uint64_t fnv1a(const std::string& s);
std::string hash_hex(const std::string& s);

// Snapshot text format: line 1 "d L n", then n lines of d coordinates.
void write_snapshot(std::ostream& out, const Configuration& gamma);
Configuration read_snapshot(std::istream& in);

void write_sample_set(std::ostream& out, const std::string& manifest,
                      const std::vector<Configuration>& samples);
std::vector<Configuration> read_sample_set(std::istream& in, std::string* manifest = nullptr);

void write_trajectory(std::ostream& out, const std::string& manifest, const Trajectory& traj);
Trajectory read_trajectory(std::istream& in, std::string* manifest = nullptr);

std::string records_to_json(const std::vector<IdentityRecord>& records);
std::string records_to_csv(const std::vector<IdentityRecord>& records);
std::string correlation_to_csv(const CorrelationEstimate& est);

// Flat sectioned key = value config. Keys may repeat within a section.
class ConfigFile {
public:
    static ConfigFile parse(std::istream& in);
    static ConfigFile parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;
    std::vector<std::string> get_all(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key, double fallback) const;
    long get_long_or(const std::string& section, const std::string& key, long fallback) const;

    // Canonical text used for the config hash.
    std::string canonical() const;

private:
    struct Entry {
        std::string section, key, value;
        int line = 0;
    };
    std::vector<Entry> entries_;
    const Entry* find(const std::string& section, const std::string& key) const;
};

// Validated run configuration assembled from a config file.
struct RunConfig {
    TorusDomain dom{1, 1.0};
    Window window;

    bool uniform_intensity = true;
    double z = 1.0;
    double rho_constant = 0;
    std::vector<std::vector<double>> rho_bumps;  // center coords..., radius, amplitude
    std::optional<MixingLaw> mixing;

    PairPotential potential;
    McmcParams mcmc;
    TrajectoryParams trajectory;
    long save_every = 1;
    long n_samples = 1000;

    std::string tests = "all";
    uint64_t seed = 0;
    std::string out_dir = ".";
    int workers = 1;

    std::string config_hash;

    static RunConfig from_file(const std::string& path);
    static RunConfig from_config(const ConfigFile& cfg);

    IntensityMeasure intensity() const;
    ScalarField density_field() const;
};

}  // namespace confsim
