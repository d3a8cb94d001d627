#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "kg/sweep.hpp"

namespace kg {

namespace {

std::string fraction_text(const PhaseDiagram& d, std::size_t b, std::size_t a) {
    if (d.missing(b, a)) return "nan";
    return fmt::format("{}", d.fraction(b, a));
}

std::string pgm(const PhaseDiagram& d, bool mask) {
    // Row 0 of the image is the highest amplitude bin.
    std::string out = fmt::format("P5\n{} {}\n255\n", d.columns(), d.bins());
    for (std::size_t r = 0; r < d.bins(); ++r) {
        const std::size_t b = d.bins() - 1 - r;
        for (std::size_t a = 0; a < d.columns(); ++a) {
            int value = 0;
            if (mask) {
                value = d.missing(b, a) ? 0 : 255;
            } else if (!d.missing(b, a)) {
                value = static_cast<int>(std::lround(255.0 * d.fraction(b, a)));
            }
            out.push_back(static_cast<char>(static_cast<unsigned char>(value)));
        }
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
    out << content;
    if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
}

}  // namespace

std::string diagram_csv(const PhaseDiagram& d) {
    std::string out = "bin,A_lo,A_hi,A_prime_lo,A_prime_hi";
    for (int e : d.alpha_exponents) out += fmt::format(",e{}", e);
    out += '\n';
    for (std::size_t b = 0; b < d.bins(); ++b) {
        out += fmt::format("{},{},{},{},{}", b, d.bin_lo[b], d.bin_hi[b], d.bin_lo_prime[b], d.bin_hi_prime[b]);
        for (std::size_t a = 0; a < d.columns(); ++a) out += "," + fraction_text(d, b, a);
        out += '\n';
    }
    return out;
}

std::string diagram_matrix(const PhaseDiagram& d) {
    std::string out;
    for (std::size_t b = 0; b < d.bins(); ++b) {
        for (std::size_t a = 0; a < d.columns(); ++a) {
            if (a) out += ' ';
            out += d.missing(b, a) ? std::string("NaN") : fmt::format("{}", d.fraction(b, a));
        }
        out += '\n';
    }
    return out;
}

std::string diagram_pgm(const PhaseDiagram& d) { return pgm(d, false); }
std::string diagram_mask_pgm(const PhaseDiagram& d) { return pgm(d, true); }

std::vector<std::filesystem::path> write_diagrams(const std::filesystem::path& dir, const SweepPlan& plan,
                                                  const std::vector<PhaseDiagram>& diagrams) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    nlohmann::json meta;
    meta["plan"] = nlohmann::json::parse(plan_to_json(plan));
    meta["diagrams"] = nlohmann::json::array();
    meta["layout"] = {{"csv", "rows = amplitude bins ascending, columns = alpha exponents ascending"},
                      {"pgm", "row 0 = highest amplitude bin; value = round(255 * fraction); missing = 0"},
                      {"mask", "255 = pixel has valid runs, 0 = missing"}};

    for (const auto& d : diagrams) {
        const std::string stem = fmt::format("phase_mu{}", d.mu_idx);
        const auto csv = dir / (stem + ".csv");
        const auto dat = dir / (stem + ".dat");
        const auto img = dir / (stem + ".pgm");
        const auto mask = dir / (stem + "_mask.pgm");
        write_file(csv, diagram_csv(d));
        write_file(dat, diagram_matrix(d));
        write_file(img, diagram_pgm(d));
        write_file(mask, diagram_mask_pgm(d));
        written.insert(written.end(), {csv, dat, img, mask});

        const DiagramSummary s = diagram_stats(d);
        nlohmann::json cols = nlohmann::json::array();
        for (const auto& c : s.columns) {
            nlohmann::json jc{{"alpha_exp", c.alpha_exp}};
            if (c.boundary_prime) {
                jc["boundary_A_prime"] = *c.boundary_prime;
            } else {
                jc["boundary_A_prime"] = nullptr;
                jc["undefined"] = c.undefined_reason;
            }
            cols.push_back(jc);
        }
        meta["diagrams"].push_back({{"mu", d.mu},
                                    {"mu_idx", d.mu_idx},
                                    {"files", {csv.filename().string(), dat.filename().string(),
                                               img.filename().string(), mask.filename().string()}},
                                    {"valid_runs", s.valid_runs},
                                    {"failed_runs", s.failed_runs},
                                    {"mixed_pixels", s.mixed_pixels},
                                    {"columns", cols}});
    }
    const auto meta_path = dir / "sweep_meta.json";
    write_file(meta_path, meta.dump(2) + "\n");
    written.push_back(meta_path);
    return written;
}

}  // namespace kg
