#include "cfarfp/datacube.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cfarfp/rng.hpp"

namespace cfarfp {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

DataCube load_cube(const std::string& path, CubeFormat format) {
    std::ifstream in(path, format == CubeFormat::binary ? std::ios::binary : std::ios::in);
    if (!in) throw std::runtime_error("load_cube: cannot open " + path);
    DataCube cube;
    if (format == CubeFormat::csv) {
        std::string line;
        size_t width = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string field;
            std::vector<double> row;
            while (std::getline(ss, field, ',')) {
                size_t pos = 0;
                const double v = std::stod(field, &pos);
                row.push_back(v);
            }
            if (row.size() % 2 != 0)
                throw std::runtime_error("load_cube: odd column count in " + path);
            if (width == 0)
                width = row.size();
            else if (row.size() != width)
                throw std::runtime_error("load_cube: ragged rows in " + path);
            for (size_t i = 0; i < row.size(); i += 2)
                cube.samples.push_back(cxd{row[i], row[i + 1]});
            ++cube.cells;
        }
        if (cube.cells == 0) throw std::runtime_error("load_cube: empty file " + path);
        cube.pulses = static_cast<int>(width / 2);
        return cube;
    }
    uint32_t hdr[2];
    in.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    if (!in) throw std::runtime_error("load_cube: truncated header in " + path);
    cube.cells = static_cast<int>(hdr[0]);
    cube.pulses = static_cast<int>(hdr[1]);
    const size_t count = static_cast<size_t>(cube.cells) * cube.pulses;
    std::vector<float> raw(count * 2);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
    if (static_cast<size_t>(in.gcount()) != raw.size() * sizeof(float))
        throw std::runtime_error("load_cube: size does not match header in " + path);
    if (in.peek() != EOF)
        throw std::runtime_error("load_cube: trailing bytes beyond header dimensions");
    cube.samples.resize(count);
    for (size_t i = 0; i < count; ++i)
        cube.samples[i] = cxd{raw[2 * i], raw[2 * i + 1]};
    return cube;
}

void save_cube(const DataCube& cube, const std::string& path, CubeFormat format) {
    std::ofstream out(path, format == CubeFormat::binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("save_cube: cannot open " + path);
    if (format == CubeFormat::csv) {
        out.precision(17);
        for (int c = 0; c < cube.cells; ++c) {
            for (int p = 0; p < cube.pulses; ++p) {
                if (p) out << ',';
                const cxd v = cube.at(c, p);
                out << v.real() << ',' << v.imag();
            }
            out << '\n';
        }
        return;
    }
    const uint32_t hdr[2] = {static_cast<uint32_t>(cube.cells),
                             static_cast<uint32_t>(cube.pulses)};
    out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    std::vector<float> raw;
    raw.reserve(cube.samples.size() * 2);
    for (const cxd& v : cube.samples) {
        raw.push_back(static_cast<float>(v.real()));
        raw.push_back(static_cast<float>(v.imag()));
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(float)));
}

DataCube synthesize_cube(int cells, int pulses, const ClutterModel& cm, uint64_t seed) {
    if (cells < 1 || pulses < 1) throw std::invalid_argument("synthesize_cube: bad dims");
    DataCube cube;
    cube.cells = cells;
    cube.pulses = pulses;
    cube.samples.resize(static_cast<size_t>(cells) * pulses);
    // Pulses within a cell are correlated per the clutter model; cells are
    // independent. Generated block-wise along the pulse axis with the model
    // covariance of each block (window extraction then sees the right statistics
    // for any window of length <= block).
    const int block = std::min(pulses, 256);
    const CholeskyFactor chol = cholesky(clutter_covariance(cm, block));
    for (int c = 0; c < cells; ++c) {
        TrialRng rng(seed, static_cast<uint64_t>(c));
        ComplexVec w(block);
        for (int p0 = 0; p0 < pulses; p0 += block) {
            const int len = std::min(block, pulses - p0);
            for (int i = 0; i < len; ++i) w[i] = rng.std_cnormal();
            for (int r = len - 1; r >= 0; --r) {
                cxd acc{0.0, 0.0};
                for (int j = 0; j <= r; ++j) acc += chol.entry(r, j) * w[j];
                cube.samples[static_cast<size_t>(c) * pulses + p0 + r] = acc;
            }
        }
    }
    return cube;
}

std::vector<int> window_starts(int pulses, int n) {
    if (n < 2) throw std::invalid_argument("window_starts: n must be >= 2");
    if (pulses < n) throw std::invalid_argument("window_starts: not enough pulses");
    std::vector<int> starts;
    const int stride = n - 1;
    for (int s = 0; s + n <= pulses; s += stride) starts.push_back(s);
    if (starts.back() != pulses - n) starts.push_back(pulses - n);  // use the tail
    return starts;
}

void for_each_snapshot(const DataCube& cube, int cut_cell, const ProblemDims& dims,
                       const std::function<void(const ComplexVec&,
                                                const std::vector<ComplexVec>&)>& fn) {
    const int n = dims.n;
    const int k = dims.k;
    if (k % 2 != 0) throw std::invalid_argument("for_each_snapshot: k must be even");
    if (cut_cell - k / 2 < 0 || cut_cell + k / 2 >= cube.cells)
        throw std::invalid_argument("for_each_snapshot: not enough flanking cells");
    if (cube.pulses < n) throw std::invalid_argument("for_each_snapshot: not enough pulses");

    std::vector<int> cells;
    for (int c = cut_cell - k / 2; c <= cut_cell + k / 2; ++c)
        if (c != cut_cell) cells.push_back(c);

    ComplexVec z(n);
    std::vector<ComplexVec> secondaries(k, ComplexVec(n));
    for (int s : window_starts(cube.pulses, n)) {
        for (int i = 0; i < n; ++i) z[i] = cube.at(cut_cell, s + i);
        for (int c = 0; c < k; ++c)
            for (int i = 0; i < n; ++i) secondaries[c][i] = cube.at(cells[c], s + i);
        fn(z, secondaries);
    }
}

Estimate empirical_pfa_on_cube(const DataCube& cube, const Boundary& b, int cut_cell,
                               const ProblemDims& dims) {
    const ComplexVec v = steering_vector(dims.n, 0.08);
    long hits = 0;
    long total = 0;
    for_each_snapshot(cube, cut_cell, dims,
                      [&](const ComplexVec& z, const std::vector<ComplexVec>& sec) {
                          const HermitianMatrix s = gram_accumulate(sec);
                          if (decide(b, feature_map(z, s, v)) == Decision::H1) ++hits;
                          ++total;
                      });
    const double est = static_cast<double>(hits) / total;
    return Estimate{est, std::sqrt(std::max(est * (1.0 - est), 0.0) / total), total};
}

Estimate empirical_pd_on_cube(const DataCube& cube, const Boundary& b, int cut_cell,
                              const ProblemDims& dims, double gamma, double f_d,
                              uint64_t seed) {
    const ComplexVec v = steering_vector(dims.n, f_d);
    long hits = 0;
    long total = 0;
    for_each_snapshot(
        cube, cut_cell, dims,
        [&](const ComplexVec& z, const std::vector<ComplexVec>& sec) {
            const HermitianMatrix s = gram_accumulate(sec);
            const CholeskyFactor chol = cholesky(s);
            // Sample-covariance proxy: |alpha|^2 = gamma / (K v' S^-1 v).
            const double vq = quad_form(chol, v, v).real() * dims.k;
            TrialRng rng(seed, static_cast<uint64_t>(total));
            const double mag = std::sqrt(gamma / vq);
            const double phase = kTwoPi * rng.uniform();
            const cxd alpha{mag * std::cos(phase), mag * std::sin(phase)};
            ComplexVec zt = z;
            for (int i = 0; i < dims.n; ++i) zt[i] += alpha * v[i];
            if (decide(b, feature_map(zt, chol, v)) == Decision::H1) ++hits;
            ++total;
        });
    const double est = static_cast<double>(hits) / total;
    return Estimate{est, std::sqrt(std::max(est * (1.0 - est), 0.0) / total), total};
}

}  // namespace cfarfp
