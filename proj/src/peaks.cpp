#include "mfshe/peaks.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mfshe/errors.hpp"

namespace mfshe::fractal {

double gauge_threshold(Gauge gauge, double gamma, double norm_x,
                       const GaugeNormalization& norm) {
    const double lp = log_plus(norm_x);
    if (gauge == Gauge::LinearShe)
        return std::sqrt(2.0 * norm.variance * gamma * lp);
    const double a = norm.params.alpha(), b = norm.params.beta();
    return gamma * std::pow(norm.params.t(), (a - b) / (2.0 * a - b)) *
           std::pow(lp, a / (2.0 * a - b));
}

void PeakSet::insert(const IntPoint& p) {
    std::vector<double> xd(p.begin(), p.end());
    shells[shell_of(xd)].insert(p);
}

PeakSet extract_peaks(const field::FieldSample& field, Gauge gauge,
                      double gamma, const GaugeNormalization& norm) {
    if (field.lattice.spacing != 1.0)
        throw GeometryError("extract_peaks: field spacing must be 1");
    for (double o : field.lattice.origin)
        if (o != std::floor(o))
            throw GeometryError("extract_peaks: origin must be integral");

    PeakSet ps;
    ps.d = field.lattice.d;
    ps.gauge = gauge;
    ps.gamma = gamma;

    const std::int64_t n = field.lattice.size();
    for (std::int64_t flat = 0; flat < n; ++flat) {
        const Point x = field.lattice.site(flat);
        const double v = field.values[flat];
        const double threshold_input =
            gauge == Gauge::LinearShe ? v : std::log(std::max(v, M_E));
        if (threshold_input >=
            gauge_threshold(gauge, gamma, norm2(x), norm)) {
            IntPoint ip(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                ip[i] = static_cast<std::int64_t>(std::llround(x[i]));
            ps.insert(ip);
        }
    }
    return ps;
}

void write_peaks(const PeakSet& ps, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "MFPEAKS v1 d=" << ps.d << " gauge=" << gauge_name(ps.gauge)
       << " gamma=" << ps.gamma << "\n";
    for (const auto& [sh, pts] : ps.shells)
        for (const auto& p : pts) {
            for (auto c : p) os << c << ' ';
            os << sh << "\n";
        }
    if (!os) throw Error("write failed for " + path);
}

PeakSet read_peaks(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(is, line)) throw Error(path + ": empty file");
    PeakSet ps;
    {
        std::istringstream hs(line);
        std::string magic, v1, kv;
        hs >> magic >> v1;
        if (magic != "MFPEAKS" || v1 != "v1")
            throw Error(path + ": not an MFPEAKS v1 file");
        while (hs >> kv) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw Error(path + ": bad header");
            const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
            if (key == "d") ps.d = std::stoi(val);
            else if (key == "gauge")
                ps.gauge = val == "pam" ? Gauge::Pam : Gauge::LinearShe;
            else if (key == "gamma") ps.gamma = std::stod(val);
            else throw Error(path + ": unknown header key " + key);
        }
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        IntPoint p(ps.d);
        for (auto& c : p)
            if (!(ls >> c)) throw Error(path + ": short point line");
        int shell;
        if (!(ls >> shell)) throw Error(path + ": missing shell tag");
        std::vector<double> xd(p.begin(), p.end());
        if (shell_of(xd) != shell)
            throw Error(path + ": point not in its tagged shell");
        ps.shells[shell].insert(p);
    }
    return ps;
}

} // namespace mfshe::fractal
