#include "confsim/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace confsim {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(const std::string& s) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(s));
    return buf;
}

void write_snapshot(std::ostream& out, const Configuration& gamma) {
    const TorusDomain& dom = gamma.domain();
    out << dom.d << " " << format_double(dom.L) << " " << gamma.size() << "\n";
    for (size_t i = 0; i < gamma.size(); ++i) {
        Vec p = gamma.point(i);
        for (int k = 0; k < dom.d; ++k) {
            if (k) out << " ";
            out << format_double(p[k]);
        }
        out << "\n";
    }
}

Configuration read_snapshot(std::istream& in) {
    int d = 0;
    double L = 0;
    size_t n = 0;
    if (!(in >> d >> L >> n)) throw std::runtime_error("snapshot: bad header");
    TorusDomain dom(d, L);
    Configuration gamma(dom);
    for (size_t i = 0; i < n; ++i) {
        Vec p{};
        for (int k = 0; k < d; ++k)
            if (!(in >> p[k])) throw std::runtime_error("snapshot: truncated point list");
        gamma.push_back_unchecked(p);
    }
    return gamma;
}

void write_sample_set(std::ostream& out, const std::string& manifest,
                      const std::vector<Configuration>& samples) {
    out << "# " << manifest << " count=" << samples.size() << "\n";
    for (const auto& g : samples) write_snapshot(out, g);
}

std::vector<Configuration> read_sample_set(std::istream& in, std::string* manifest) {
    std::string line;
    if (!std::getline(in, line) || line.empty() || line[0] != '#')
        throw std::runtime_error("sample set: missing manifest line");
    if (manifest) *manifest = line.substr(1);
    std::vector<Configuration> out;
    while (true) {
        in >> std::ws;
        if (in.eof()) break;
        out.push_back(read_snapshot(in));
    }
    return out;
}

void write_trajectory(std::ostream& out, const std::string& manifest, const Trajectory& traj) {
    out << "# " << manifest << " frames=" << traj.frames.size() << "\n";
    for (const auto& [t, g] : traj.frames) {
        out << "t " << format_double(t) << "\n";
        write_snapshot(out, g);
    }
}

Trajectory read_trajectory(std::istream& in, std::string* manifest) {
    std::string line;
    if (!std::getline(in, line) || line.empty() || line[0] != '#')
        throw std::runtime_error("trajectory: missing manifest line");
    if (manifest) *manifest = line.substr(1);
    Trajectory traj;
    std::string tag;
    while (in >> tag) {
        if (tag != "t") throw std::runtime_error("trajectory: expected time tag");
        double t = 0;
        if (!(in >> t)) throw std::runtime_error("trajectory: bad time");
        traj.frames.emplace_back(t, read_snapshot(in));
        in >> std::ws;
        if (in.eof()) break;
    }
    return traj;
}

std::string records_to_json(const std::vector<IdentityRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        nlohmann::json j;
        j["test"] = r.test;
        j["params_hash"] = hash_hex(r.params);
        j["seed"] = r.seed;
        j["n"] = r.n;
        j["mean"] = r.mean;
        j["stderr"] = r.std_error;
        j["target"] = r.target;
        j["z"] = r.z;
        j["pass"] = r.pass;
        if (r.rejections > 0) j["rejections"] = r.rejections;
        if (r.expect_fail) j["expect_fail"] = true;
        arr.push_back(j);
    }
    return arr.dump(2) + "\n";
}

std::string records_to_csv(const std::vector<IdentityRecord>& records) {
    std::ostringstream os;
    os << "test,params_hash,seed,n,mean,stderr,target,z,pass\n";
    for (const auto& r : records) {
        os << r.test << "," << hash_hex(r.params) << "," << r.seed << "," << r.n << ","
           << format_double(r.mean) << "," << format_double(r.std_error) << ","
           << format_double(r.target) << "," << format_double(r.z) << ","
           << (r.pass ? "true" : "false") << "\n";
    }
    return os.str();
}

std::string correlation_to_csv(const CorrelationEstimate& est) {
    std::ostringstream os;
    os << "bin_lo,bin_hi,g2,stderr\n";
    for (size_t b = 0; b < est.g2.size(); ++b) {
        os << format_double(est.bin_lo[b]) << "," << format_double(est.bin_hi[b]) << ","
           << format_double(est.g2[b]) << "," << format_double(est.g2_se[b]) << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Config files

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in) {
    ConfigFile cfg;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        Entry e;
        e.section = section;
        e.key = trim(t.substr(0, eq));
        e.value = trim(t.substr(eq + 1));
        e.line = line_no;
        if (e.key.empty())
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        cfg.entries_.push_back(std::move(e));
    }
    return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse(in);
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section, const std::string& key) const {
    for (const auto& e : entries_)
        if (e.section == section && e.key == key) return &e;
    return nullptr;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

std::string ConfigFile::get(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) throw ConfigError("config: missing [" + section + "] " + key);
    return e->value;
}

std::string ConfigFile::get_or(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    const Entry* e = find(section, key);
    return e ? e->value : fallback;
}

std::vector<std::string> ConfigFile::get_all(const std::string& section, const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (e.section == section && e.key == key) out.push_back(e.value);
    return out;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) throw ConfigError("config: missing [" + section + "] " + key);
    try {
        size_t used = 0;
        double v = std::stod(e->value, &used);
        if (used != e->value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(e->line) + ": [" + section + "] " + key +
                          " is not a number: '" + e->value + "'");
    }
}

double ConfigFile::get_double_or(const std::string& section, const std::string& key,
                                 double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long ConfigFile::get_long_or(const std::string& section, const std::string& key, long fallback) const {
    if (!has(section, key)) return fallback;
    double v = get_double(section, key);
    long l = static_cast<long>(v);
    if (static_cast<double>(l) != v) {
        const Entry* e = find(section, key);
        throw ConfigError("config line " + std::to_string(e->line) + ": [" + section + "] " + key +
                          " must be an integer");
    }
    return l;
}

std::string ConfigFile::canonical() const {
    std::ostringstream os;
    for (const auto& e : entries_) os << "[" << e.section << "]" << e.key << "=" << e.value << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// RunConfig

namespace {

std::vector<double> parse_numbers(const std::string& s, const std::string& what) {
    std::istringstream is(s);
    std::vector<double> out;
    double v;
    while (is >> v) out.push_back(v);
    if (out.empty()) throw ConfigError("config: cannot parse numbers in " + what + ": '" + s + "'");
    return out;
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    return from_config(ConfigFile::parse_file(path));
}

RunConfig RunConfig::from_config(const ConfigFile& cfg) {
    RunConfig rc;
    rc.config_hash = hash_hex(cfg.canonical());

    int d = static_cast<int>(cfg.get_long_or("domain", "d", 2));
    double L = cfg.get_double_or("domain", "L", 4.0);
    rc.dom = TorusDomain(d, L);

    if (cfg.has("window", "lower") || cfg.has("window", "upper")) {
        auto lo = parse_numbers(cfg.get("window", "lower"), "[window] lower");
        auto hi = parse_numbers(cfg.get("window", "upper"), "[window] upper");
        if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d)
            throw ConfigError("config: window bounds must have d components");
        Vec vlo{}, vhi{};
        for (int i = 0; i < d; ++i) {
            vlo[i] = lo[static_cast<size_t>(i)];
            vhi[i] = hi[static_cast<size_t>(i)];
        }
        rc.window = Window(d, vlo, vhi);
        rc.window.validate_in(rc.dom);
    } else {
        rc.window = Window::whole_box(rc.dom);
    }

    std::string ikind = cfg.get_or("intensity", "kind", "uniform");
    if (ikind == "uniform") {
        rc.uniform_intensity = true;
        rc.z = cfg.get_double_or("intensity", "z", 1.0);
        if (rc.z < 0) throw ConfigError("config: [intensity] z must be >= 0");
    } else if (ikind == "density") {
        rc.uniform_intensity = false;
        rc.rho_constant = cfg.get_double_or("intensity", "constant", 0.0);
        for (const auto& b : cfg.get_all("intensity", "bump")) {
            auto nums = parse_numbers(b, "[intensity] bump");
            if (static_cast<int>(nums.size()) != d + 2)
                throw ConfigError("config: [intensity] bump needs d center coords, radius, amplitude");
            rc.rho_bumps.push_back(nums);
        }
    } else {
        throw ConfigError("config: [intensity] kind must be uniform or density");
    }

    if (cfg.has("mixing", "atom")) {
        std::vector<std::pair<double, double>> atoms;
        for (const auto& a : cfg.get_all("mixing", "atom")) {
            auto nums = parse_numbers(a, "[mixing] atom");
            if (nums.size() != 2) throw ConfigError("config: [mixing] atom needs 'z p'");
            atoms.emplace_back(nums[0], nums[1]);
        }
        rc.mixing = MixingLaw(atoms);
    }

    std::string pkind = cfg.get_or("potential", "kind", "zero");
    if (pkind == "zero") {
        rc.potential = PairPotential::zero();
    } else if (pkind == "hard_core") {
        rc.potential = PairPotential::hard_core(cfg.get_double("potential", "R"));
    } else if (pkind == "lennard_jones") {
        rc.potential = PairPotential::lennard_jones(
            cfg.get_double_or("potential", "a", 1.0), cfg.get_double_or("potential", "b", 1.0),
            cfg.get_double_or("potential", "r_cut", 2.5),
            cfg.get_double_or("potential", "taper_width", 0.5));
    } else if (pkind == "tabulated") {
        std::ifstream in(cfg.get("potential", "file"));
        if (!in) throw ConfigError("config: cannot open tabulated potential file");
        rc.potential = PairPotential::tabulated_from_stream(in);
    } else {
        throw ConfigError("config: unknown potential kind '" + pkind + "'");
    }

    rc.mcmc.p_birth = cfg.get_double_or("mcmc", "p_birth", 0.35);
    rc.mcmc.p_death = cfg.get_double_or("mcmc", "p_death", 0.35);
    rc.mcmc.p_move = cfg.get_double_or("mcmc", "p_move", 0.30);
    rc.mcmc.move_scale = cfg.get_double_or(
        "mcmc", "move_scale", rc.potential.is_zero() ? 0.25 : 0.1 * rc.potential.r_cut());
    rc.mcmc.burn_in = cfg.get_long_or("mcmc", "burn_in", 100000);
    rc.mcmc.thinning = cfg.get_long_or("mcmc", "thinning", 1000);
    rc.mcmc.n_samples = cfg.get_long_or("mcmc", "n_samples", 1000);

    rc.trajectory.dt = cfg.get_double_or("trajectory", "dt", 1e-3);
    rc.trajectory.n_steps = cfg.get_long_or("trajectory", "n_steps", 100);
    rc.save_every = cfg.get_long_or("trajectory", "save_every", 1);

    rc.tests = cfg.get_or("run", "tests", "all");
    rc.seed = static_cast<uint64_t>(cfg.get_long_or("run", "seed", 12345));
    rc.out_dir = cfg.get_or("run", "out", ".");
    rc.workers = static_cast<int>(cfg.get_long_or("run", "workers", 1));
    rc.n_samples = cfg.get_long_or("run", "n_samples", 1000);
    rc.mcmc.seed = rc.seed;
    rc.trajectory.seed = rc.seed;
    return rc;
}

ScalarField RunConfig::density_field() const {
    ScalarField f(dom, rho_constant);
    for (const auto& b : rho_bumps) {
        Vec c{};
        for (int i = 0; i < dom.d; ++i) c[i] = b[static_cast<size_t>(i)];
        f.add_bump(c, b[static_cast<size_t>(dom.d)], b[static_cast<size_t>(dom.d) + 1]);
    }
    return f;
}

IntensityMeasure RunConfig::intensity() const {
    if (uniform_intensity) return IntensityMeasure::uniform(z);
    ScalarField f = density_field();
    double bound = rho_constant;
    for (const auto& b : rho_bumps) bound += std::abs(b[static_cast<size_t>(dom.d) + 1]) * std::exp(-1.0);
    bound *= 1.000001;
    if (!(bound > 0)) throw ConfigError("config: density intensity has nonpositive bound");
    return IntensityMeasure::density([f](const Vec& x) { return f.value(x); }, bound);
}

}  // namespace confsim
