#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "timolab/kinematics.hpp"
#include "timolab/legendre.hpp"

namespace timolab {

/// Plain-text field format:
///   timoshenko-field
///   length <L>
///   degree <p>
///   <component> <p coefficients>    (one line each for u1 u2 u3 psi1 psi2)
inline void write_field(std::ostream& out, const TimoshenkoField& f) {
    const ClampedBasis& basis = f.u3.basis();
    out << "timoshenko-field\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", basis.length());
    out << "length " << buf << "\n";
    out << "degree " << basis.degree() << "\n";
    auto line = [&](const char* name, const Profile1D& p) {
        out << name;
        for (int i = 0; i < p.coeffs().size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", p.coeffs()[i]);
            out << ' ' << buf;
        }
        out << '\n';
    };
    line("u1", f.u1);
    line("u2", f.u2);
    line("u3", f.u3);
    line("psi1", f.psi1);
    line("psi2", f.psi2);
}

inline void write_field_file(const std::string& path, const TimoshenkoField& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_field(out, f);
}

inline TimoshenkoField read_field(std::istream& in) {
    std::string tag;
    if (!(in >> tag) || tag != "timoshenko-field")
        throw std::runtime_error("field file: missing 'timoshenko-field' header");
    double L = 0;
    int degree = 0;
    if (!(in >> tag >> L) || tag != "length" || !(L > 0))
        throw std::runtime_error("field file: bad length line");
    if (!(in >> tag >> degree) || tag != "degree" || degree < 1)
        throw std::runtime_error("field file: bad degree line");
    ClampedBasis basis(degree, L);
    TimoshenkoField f = TimoshenkoField::zero(basis);
    for (const char* name : {"u1", "u2", "u3", "psi1", "psi2"}) {
        if (!(in >> tag) || tag != name)
            throw std::runtime_error(std::string("field file: expected component ") + name);
        Eigen::VectorXd c(basis.size());
        for (int i = 0; i < basis.size(); ++i)
            if (!(in >> c[i]))
                throw std::runtime_error(std::string("field file: short coefficient line for ") +
                                         name);
        Profile1D p(basis, c);
        if (tag == "u1")
            f.u1 = p;
        else if (tag == "u2")
            f.u2 = p;
        else if (tag == "u3")
            f.u3 = p;
        else if (tag == "psi1")
            f.psi1 = p;
        else
            f.psi2 = p;
    }
    return f;
}

inline TimoshenkoField read_field_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_field(in);
}

}  // namespace timolab
