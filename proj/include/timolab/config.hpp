#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "timolab/gamma.hpp"
#include "timolab/loads.hpp"
#include "timolab/material.hpp"
#include "timolab/section.hpp"

namespace timolab {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat `dotted.key = value` file; '#' starts a comment.
class KeyValueFile {
public:
    static KeyValueFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    static KeyValueFile parse(const std::string& text) {
        KeyValueFile kv;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string trimmed = trim(line);
            if (trimmed.empty()) continue;
            const std::size_t eq = trimmed.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string val = trim(trimmed.substr(eq + 1));
            if (key.empty())
                throw ConfigError("line " + std::to_string(lineno) + ": empty key");
            kv.values_[key] = val;
        }
        return kv;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& dflt = "") const {
        auto it = values_.find(key);
        return it == values_.end() ? dflt : it->second;
    }

    double get_double(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing key: " + key);
        return to_double(it->second, key);
    }
    double get_double(const std::string& key, double dflt) const {
        return has(key) ? get_double(key) : dflt;
    }

    int get_int(const std::string& key, int dflt) const {
        if (!has(key)) return dflt;
        return static_cast<int>(get_double(key));
    }

    std::vector<double> get_list(const std::string& key) const {
        std::vector<double> out;
        auto it = values_.find(key);
        if (it == values_.end()) return out;
        std::istringstream in(it->second);
        std::string tok;
        while (in >> tok) out.push_back(to_double(tok, key));
        return out;
    }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    static std::string trim(const std::string& s) {
        const std::size_t b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const std::size_t e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }
    static double to_double(const std::string& s, const std::string& key) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key " + key + ": not a number: '" + s + "'");
        }
    }
    std::map<std::string, std::string> values_;
};

struct ExperimentConfig {
    MaterialModuli moduli;
    CrossSection section = CrossSection::rectangle(1.0, 1.0);
    double length = 1.0;
    double eps_r = 0.1;
    LoadSpec loads;
    int p1 = 4, p2 = 4, p3 = 10;
    std::vector<double> eps_grid = SweepSetup::default_eps_grid();
    double cond_limit = 1e12;
    std::string out_dir = ".";
    std::vector<double> bn_eps_r_grid = {0.1, 0.05, 0.025};
    bool isotropic = false;

    static ExperimentConfig load(const std::string& path) {
        return from_kv(KeyValueFile::parse_file(path));
    }

    static ExperimentConfig from_kv(const KeyValueFile& kv) {
        ExperimentConfig cfg;
        if (kv.has("material.isotropic.lambda")) {
            cfg.moduli = isotropic_moduli(kv.get_double("material.isotropic.lambda"),
                                          kv.get_double("material.isotropic.mu"),
                                          kv.get_double("material.tau_R", 1.0));
            cfg.isotropic = true;
        } else {
            cfg.moduli.mu = kv.get_double("material.mu");
            cfg.moduli.lambda = kv.get_double("material.lambda");
            cfg.moduli.tau1 = kv.get_double("material.tau1");
            cfg.moduli.tau2 = kv.get_double("material.tau2");
            cfg.moduli.gamma = kv.get_double("material.gamma");
            cfg.moduli.tau_R = kv.get_double("material.tau_R", 1.0);
        }

        const std::string kind = kv.get_string("section.kind", "rectangle");
        std::vector<double> params = kv.get_list("section.params");
        if (kind == "rectangle") {
            if (params.size() != 2) throw ConfigError("section.params: rectangle needs w h");
            cfg.section = CrossSection::rectangle(params[0], params[1]);
        } else if (kind == "ellipse") {
            if (params.size() != 2) throw ConfigError("section.params: ellipse needs a b");
            cfg.section = CrossSection::ellipse(params[0], params[1]);
        } else if (kind == "polygon") {
            if (params.size() < 6 || params.size() % 2 != 0)
                throw ConfigError("section.params: polygon needs x1 y1 x2 y2 ... (>= 3 vertices)");
            std::vector<Vec2> verts;
            for (std::size_t i = 0; i < params.size(); i += 2)
                verts.push_back({params[i], params[i + 1]});
            cfg.section = CrossSection::polygon(std::move(verts));
        } else {
            throw ConfigError("section.kind: unknown kind '" + kind + "'");
        }

        cfg.length = kv.get_double("geometry.L", 1.0);
        cfg.eps_r = kv.get_double("geometry.eps_r", 0.1);
        if (!(cfg.eps_r > 0) || !(cfg.eps_r < 1))
            throw ConfigError("geometry.eps_r must lie in (0, 1)");
        cfg.p1 = kv.get_int("solver.p1", 4);
        cfg.p2 = kv.get_int("solver.p2", 4);
        cfg.p3 = kv.get_int("solver.p3", 10);
        cfg.cond_limit = kv.get_double("solver.cond_limit", 1e12);
        if (kv.has("sweep.eps")) cfg.eps_grid = kv.get_list("sweep.eps");
        for (std::size_t i = 0; i < cfg.eps_grid.size(); ++i) {
            if (!(cfg.eps_grid[i] > 0)) throw ConfigError("sweep.eps: entries must be positive");
            if (i > 0 && !(cfg.eps_grid[i] < cfg.eps_grid[i - 1]))
                throw ConfigError("sweep.eps: grid must be strictly decreasing");
        }
        if (kv.has("sweep.bn_eps_r")) cfg.bn_eps_r_grid = kv.get_list("sweep.bn_eps_r");
        cfg.out_dir = kv.get_string("output.dir", ".");

        // Loads: groups of (c p1 p2 p3) per component and surface.
        auto read_poly = [&](const std::string& key) {
            std::vector<double> nums = kv.get_list(key);
            if (nums.size() % 4 != 0)
                throw ConfigError(key + ": expected groups of 4 numbers (c p1 p2 p3)");
            std::vector<Monomial> terms;
            for (std::size_t i = 0; i < nums.size(); i += 4)
                terms.push_back({nums[i], static_cast<int>(nums[i + 1]),
                                 static_cast<int>(nums[i + 2]), static_cast<int>(nums[i + 3])});
            return Poly3(std::move(terms));
        };
        const char* surf[3] = {"body", "lateral", "end"};
        for (int s = 0; s < 3; ++s)
            for (int i = 0; i < 3; ++i) {
                const std::string key =
                    std::string("loads.") + surf[s] + "." + std::to_string(i + 1);
                Poly3 p = read_poly(key);
                if (s == 0)
                    cfg.loads.body[i] = p;
                else if (s == 1)
                    cfg.loads.lateral[i] = p;
                else
                    cfg.loads.end[i] = p;
            }
        if (cfg.loads.max_degree() > 6)
            throw ConfigError("loads: polynomial degree above 6 exceeds the quadrature budget");
        return cfg;
    }

    SweepSetup sweep_setup() const {
        SweepSetup s;
        s.moduli = moduli;
        s.section = section;
        s.length = length;
        s.eps_r = eps_r;
        s.loads = loads;
        s.p1 = p1;
        s.p2 = p2;
        s.p3 = p3;
        s.eps_grid = eps_grid;
        s.cond_limit = cond_limit;
        return s;
    }
};

}  // namespace timolab
