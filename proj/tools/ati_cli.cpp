#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ati/affine_ss.hpp"
#include "ati/datadriven.hpp"
#include "ati/excitation.hpp"
#include "ati/io.hpp"
#include "ati/polykernel.hpp"
#include "ati/scenario.hpp"

namespace {

using ati::io::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFailed = 2;

struct Globals {
    double tol = 0.0;
    std::optional<long> seed;
    bool json = false;
    std::string outDir;
    std::optional<int> m;
    std::string descriptor;
};

struct Outcome {
    json report;
    bool holds = true;
    std::string table;
    // Extra files for --out, name -> contents.
    std::vector<std::pair<std::string, std::string>> artifacts;
};

int resolveM(const Globals& g, const std::string& dataPath, int fallback = -1)
{
    if (g.m) {
        return *g.m;
    }
    std::string desc = g.descriptor;
    if (desc.empty()) {
        const std::filesystem::path p(dataPath);
        const std::filesystem::path side = p.parent_path() / (p.stem().string() + ".json");
        if (std::filesystem::exists(side)) {
            desc = side.string();
        }
    }
    if (!desc.empty()) {
        return ati::io::readDescriptor(desc).m;
    }
    if (fallback >= 0) {
        return fallback;
    }
    throw ati::Error(ati::ErrorCode::InvalidArgument,
        "input count unknown for '" + dataPath + "'; pass --m or a descriptor JSON via --descriptor");
}

ati::Trajectory loadTrajectory(const Globals& g, const std::string& path, int fallbackM = -1)
{
    const int m = resolveM(g, path, fallbackM);
    std::ifstream probe(path);
    if (!probe) {
        throw ati::Error(ati::ErrorCode::ParseError, "cannot open '" + path + "'");
    }
    return ati::io::readTrajectoryCsv(probe, m);
}

ati::Trajectory loadInputsOnly(const std::string& path)
{
    const ati::Matrix M = ati::io::readMatrixCsv(path);
    return ati::Trajectory(M, static_cast<int>(M.cols()));
}

json rankJson(const ati::RankResult& r)
{
    return json {{"rank", r.rank}, {"singular_values", ati::io::toJson(r.singularValues)},
        {"threshold", ati::io::round12(r.threshold)}, {"gap_ratio", ati::io::round12(r.gapRatio())}};
}

json checkJson(const ati::RankCheck& rc)
{
    json j = rankJson(rc.detail);
    j["target"] = rc.target;
    j["holds"] = rc.holds;
    return j;
}

std::vector<double> parseList(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw ati::Error(ati::ErrorCode::InvalidArgument, "'" + item + "' is not a number");
        }
    }
    return out;
}

ati::Vector toVector(const std::vector<double>& v, std::size_t from, std::size_t count)
{
    ati::Vector out(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
        out(static_cast<Eigen::Index>(i)) = v[from + i];
    }
    return out;
}

std::string csvOf(const ati::Matrix& M, const std::vector<std::string>& labels = {})
{
    std::ostringstream os;
    ati::io::writeTrajectoryCsv(os, M, labels);
    return os.str();
}

ati::LinearizationMode parseMode(const std::string& s)
{
    if (s == "analytic") {
        return ati::LinearizationMode::analytic();
    }
    if (s.rfind("fd:", 0) == 0) {
        const std::vector<double> h = parseList(s.substr(3));
        if (h.size() == 1) {
            return ati::LinearizationMode::finiteDifference(h.front());
        }
    }
    throw ati::Error(ati::ErrorCode::InvalidArgument, "--mode must be 'analytic' or 'fd:<step>'");
}

void writeArtifacts(const Globals& g, const std::string& command, const Outcome& out)
{
    if (g.outDir.empty()) {
        return;
    }
    std::filesystem::create_directories(g.outDir);
    const std::filesystem::path dir(g.outDir);
    std::ofstream(dir / (command + ".json")) << out.report.dump(2) << "\n";
    if (!out.table.empty()) {
        std::ofstream(dir / (command + ".txt")) << out.table;
    }
    for (const auto& [name, contents] : out.artifacts) {
        std::ofstream(dir / name) << contents;
    }
}

bool conditionCode(ati::ErrorCode c)
{
    using ati::ErrorCode;
    return c == ErrorCode::ExcitationDeficient || c == ErrorCode::NotConverged || c == ErrorCode::Infeasible
        || c == ErrorCode::AmbiguousContinuation || c == ErrorCode::InconsistentRepresentation;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app {"Affine time-invariant behaviors: excitation, data-driven models, exact kernel algebra"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all subcommand help");

    Globals g;
    app.add_option("--tol", g.tol, "Relative rank tolerance (default max(rows,cols)*eps)");
    app.add_option("--seed", g.seed, "Seed for randomized commands");
    app.add_flag("--json", g.json, "Print JSON instead of the text table where both exist");
    app.add_option("--out", g.outDir, "Directory receiving report and data artifacts");
    app.add_option("--m", g.m, "Number of input variables in trajectory files")->check(CLI::NonNegativeNumber);
    app.add_option("--descriptor", g.descriptor, "Sidecar JSON {\"m\": <int>, \"labels\": [...]}");

    std::string command;
    auto sub = [&](const char* name, const char* help) {
        CLI::App* s = app.add_subcommand(name, help);
        s->fallthrough();
        s->callback([&command, s] { command = s->get_name(); });
        return s;
    };

    // hankel
    int hankelL = 1;
    std::string hankelFile;
    CLI::App* hankelCmd = sub("hankel", "Block-Hankel matrix of a trajectory");
    hankelCmd->add_option("--L", hankelL, "Depth")->required();
    hankelCmd->add_option("traj", hankelFile, "Trajectory CSV")->required();

    // pe
    std::string peClass = "affine";
    int peOrder = 1;
    std::string peFile;
    CLI::App* peCmd = sub("pe", "Persistency of excitation of an input sequence");
    peCmd->add_option("--class", peClass, "Model class")->check(CLI::IsMember({"linear", "affine"}));
    peCmd->add_option("--order", peOrder, "Order L")->required();
    peCmd->add_option("traj", peFile, "Input CSV (every column is an input)")->required();

    // gape
    int gapeOrder = 1;
    int gapeN = 0;
    std::string gapeFile;
    CLI::App* gapeCmd = sub("gape", "Generalized affine excitation rank mL+n+1 of measured data");
    gapeCmd->add_option("--order", gapeOrder, "Depth L")->required();
    gapeCmd->add_option("--n", gapeN, "State dimension")->required();
    gapeCmd->add_option("traj", gapeFile, "Trajectory CSV")->required();

    // rank-check
    int rcL = 1;
    int rcN = 0;
    std::string rcInputs, rcStates;
    CLI::App* rcCmd = sub("rank-check", "Affine rank condition on inputs and states");
    rcCmd->add_option("--L", rcL, "Depth")->required();
    rcCmd->add_option("--n", rcN, "State dimension")->required();
    rcCmd->add_option("traj", rcInputs, "Input CSV")->required();
    rcCmd->add_option("states", rcStates, "State CSV")->required();

    // complete
    int cTini = 0;
    int cL = 1;
    std::string cData, cPrefix, cInputs;
    CLI::App* cCmd = sub("complete", "Continue a trajectory prefix under given future inputs");
    cCmd->add_option("--tini", cTini, "Prefix length")->required();
    cCmd->add_option("--L", cL, "Window depth")->required();
    cCmd->add_option("data", cData, "Measured trajectory CSV")->required();
    cCmd->add_option("prefix", cPrefix, "Prefix trajectory CSV")->required();
    cCmd->add_option("inputs", cInputs, "Future input CSV")->required();

    // ident-kernel
    int ikL = 1;
    std::optional<int> ikN;
    std::string ikData;
    CLI::App* ikCmd = sub("ident-kernel", "Kernel representation from data");
    ikCmd->add_option("--L", ikL, "Depth")->required();
    ikCmd->add_option("--n", ikN, "State dimension (enables the excitation rank check)");
    ikCmd->add_option("data", ikData, "Trajectory CSV")->required();

    // invariants
    int invT = 1;
    std::string invData;
    CLI::App* invCmd = sub("invariants", "Input count, order and lag from data");
    invCmd->add_option("--tmax", invT, "Largest window depth")->required();
    invCmd->add_option("data", invData, "Trajectory CSV")->required();

    // simulate
    std::string simSystem, simInputs, simX0;
    CLI::App* simCmd = sub("simulate", "Simulate an affine state-space system");
    simCmd->add_option("system", simSystem, "System JSON")->required();
    simCmd->add_option("inputs", simInputs, "Input CSV")->required();
    simCmd->add_option("--x0", simX0, "Initial state, comma separated (default 0)");

    // lift
    std::string liftSystem;
    CLI::App* liftCmd = sub("lift", "Linear realization with the constant as an extra state");
    liftCmd->add_option("system", liftSystem, "System JSON")->required();

    // linearize
    std::string linPlant, linAt, linMode = "analytic";
    CLI::App* linCmd = sub("linearize", "Affine linearization of a nonlinear plant");
    linCmd->add_option("plant", linPlant, "Plant JSON")->required();
    linCmd->add_option("--at", linAt, "Operating point x,u,y as n+m+p comma separated numbers")->required();
    linCmd->add_option("--mode", linMode, "analytic or fd:<step>");

    // consistency
    int consWindow = 0;
    std::string consFile;
    CLI::App* consCmd = sub("consistency", "Does R(sigma)w = c admit a solution");
    consCmd->add_option("--window", consWindow, "Block-Toeplitz window (0: default)");
    consCmd->add_option("kernel", consFile, "Kernel JSON")->required();

    // equiv
    std::string eqA, eqB;
    CLI::App* eqCmd = sub("equiv", "Do two kernel representations describe the same behavior");
    eqCmd->add_option("first", eqA, "Kernel JSON")->required();
    eqCmd->add_option("second", eqB, "Kernel JSON")->required();

    // syzygy
    std::string syzFile;
    CLI::App* syzCmd = sub("syzygy", "Generators of the left syzygy module");
    syzCmd->add_option("matrix", syzFile, "Polynomial matrix or kernel JSON")->required();

    // smith
    std::string smithFile;
    CLI::App* smithCmd = sub("smith", "Smith form U R V = diag(d)");
    smithCmd->add_option("matrix", smithFile, "Polynomial matrix or kernel JSON")->required();

    sub("worked-example", "Rank checks of the two-state reference example")->alias("example-sec7");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitError;
    }

    const double tol = g.tol;
    Outcome out;
    try {
        if (command == "hankel") {
            const ati::Trajectory w = loadTrajectory(g, hankelFile, 0);
            const ati::HankelMatrix H = ati::hankel(w, hankelL);
            out.report = {{"depth", H.depth}, {"block_rows", H.blockRows}, {"rows", H.entries.rows()},
                {"cols", H.entries.cols()}, {"H", ati::io::toJson(H.entries)}};
        } else if (command == "pe") {
            const ati::Trajectory u = loadInputsOnly(peFile);
            const auto cls = peClass == "linear" ? ati::ModelClass::Linear : ati::ModelClass::Affine;
            const ati::RankCheck rc = ati::peCheck(u, peOrder, cls, tol);
            out.report = checkJson(rc);
            out.report["class"] = peClass;
            out.report["order"] = peOrder;
            out.holds = rc.holds;
        } else if (command == "gape") {
            const ati::Trajectory w = loadTrajectory(g, gapeFile);
            const ati::RankCheck rc = ati::gapeCheck(w, gapeOrder, gapeN, tol);
            out.report = checkJson(rc);
            out.report["order"] = gapeOrder;
            out.report["n"] = gapeN;
            out.holds = rc.holds;
        } else if (command == "rank-check") {
            const ati::Trajectory u = loadInputsOnly(rcInputs);
            const ati::Matrix x = ati::io::readMatrixCsv(rcStates);
            if (x.cols() != rcN) {
                throw ati::Error(ati::ErrorCode::DimensionMismatch,
                    "state file has " + std::to_string(x.cols()) + " columns, --n is " + std::to_string(rcN));
            }
            const ati::RankCheck rc = ati::rankConditionAffine(x, u, rcL, tol);
            out.report = checkJson(rc);
            out.report["L"] = rcL;
            out.report["n"] = rcN;
            out.holds = rc.holds;
        } else if (command == "complete") {
            const ati::Trajectory wd = loadTrajectory(g, cData);
            const ati::DataDrivenRep rep(wd, cL);
            const ati::Trajectory uf = loadInputsOnly(cInputs);
            if (cTini + uf.length() != cL) {
                throw ati::Error(ati::ErrorCode::DimensionMismatch, "--tini plus the future input length must equal --L");
            }
            ati::Completion c;
            if (cTini == 0) {
                c = ati::completeFromInputs(rep, uf, ati::kDefaultResidualTol);
            } else {
                const ati::Trajectory prefix(ati::io::readMatrixCsv(cPrefix), wd.m());
                if (prefix.length() != cTini) {
                    throw ati::Error(ati::ErrorCode::DimensionMismatch, "prefix length differs from --tini");
                }
                c = ati::complete(rep, prefix, uf, ati::kDefaultResidualTol);
            }
            out.report = {{"tini", cTini}, {"L", cL}, {"outputs", ati::io::toJson(c.outputs)},
                {"residual", ati::io::round12(c.residual)}, {"ambiguity", ati::io::round12(c.ambiguity)}};
            out.artifacts.emplace_back("completion.csv", csvOf(c.outputs));
        } else if (command == "ident-kernel") {
            const ati::Trajectory wd = loadTrajectory(g, ikData);
            const ati::KernelRecovery kr = ati::recoverKernel(ati::DataDrivenRep(wd, ikL), ikN, tol);
            bool exact = true;
            ati::AffineKernelRep kernel;
            try {
                kernel = ati::rationalizeKernel(kr);
            } catch (const ati::Error& e) {
                if (e.code() != ati::ErrorCode::NotRational) {
                    throw;
                }
                exact = false;
                kernel = kr.rep;
            }
            out.report = {{"L", ikL}, {"kernel", ati::io::toJson(kernel)}, {"rationalized", exact},
                {"laws", ati::io::toJson(kr.laws)}, {"offsets", ati::io::toJson(kr.offsets)},
                {"excitation", checkJson(kr.excitation)}};
        } else if (command == "invariants") {
            const ati::Trajectory wd = loadTrajectory(g, invData);
            const ati::IntegerInvariants inv = ati::invariantsFromData(wd, invT, tol);
            out.report = {{"q", inv.q}, {"m", inv.m}, {"n", inv.n}, {"ell", inv.ell}, {"d", inv.dSequence},
                {"rho", inv.rhoSequence}, {"verbatim_n", inv.verbatimN}, {"verbatim_ell", inv.verbatimEll},
                {"column_saturated", inv.columnSaturated}};
        } else if (command == "simulate") {
            const ati::AffineStateSpace sys = ati::io::systemFromJson(ati::io::readJsonFile(simSystem));
            const ati::Trajectory u = loadInputsOnly(simInputs);
            ati::Vector x0 = ati::Vector::Zero(sys.n());
            if (!simX0.empty()) {
                const std::vector<double> v = parseList(simX0);
                if (static_cast<int>(v.size()) != sys.n()) {
                    throw ati::Error(ati::ErrorCode::DimensionMismatch, "--x0 needs " + std::to_string(sys.n()) + " values");
                }
                x0 = toVector(v, 0, v.size());
            }
            const ati::Simulation sim = ati::simulate(sys, x0, u);
            out.report = {{"states", ati::io::toJson(sim.x)}, {"outputs", ati::io::toJson(sim.y)},
                {"final_state", ati::io::toJson(sim.finalState)}};
            ati::Matrix w(u.length(), u.q() + sim.y.cols());
            w << u.data(), sim.y;
            out.artifacts.emplace_back("trajectory.csv", csvOf(w));
            out.artifacts.emplace_back("states.csv", csvOf(sim.x));
        } else if (command == "lift") {
            const ati::AffineStateSpace sys = ati::io::systemFromJson(ati::io::readJsonFile(liftSystem));
            out.report = ati::io::toJson(ati::lift(sys));
        } else if (command == "linearize") {
            const ati::NonlinearPlant plant = ati::io::plantFromJson(ati::io::readJsonFile(linPlant));
            const std::vector<double> at = parseList(linAt);
            const auto n = static_cast<std::size_t>(plant.n);
            const auto m = static_cast<std::size_t>(plant.m);
            const auto p = static_cast<std::size_t>(plant.p());
            if (at.size() != n + m + p) {
                throw ati::Error(ati::ErrorCode::DimensionMismatch,
                    "--at needs n+m+p = " + std::to_string(n + m + p) + " values");
            }
            const ati::AffineStateSpace sys = ati::linearize(
                plant, toVector(at, 0, n), toVector(at, n, m), toVector(at, n + m, p), parseMode(linMode));
            out.report = ati::io::toJson(sys);
        } else if (command == "consistency") {
            const ati::AffineKernelRep rep = ati::io::kernelFromJson(ati::io::readJsonFile(consFile));
            if (rep.isConstant() && consWindow == 0) {
                const bool ok = ati::consistentConstant(rep);
                const ati::PolyMatrix K = ati::syzygyBasis(rep.R);
                out.report = {{"consistent", ok}, {"offset", "constant"}, {"syzygy", ati::io::toJson(K)}};
                out.holds = ok;
            } else {
                const ati::SequenceConsistency sc = ati::consistentSequence(rep, consWindow);
                out.report = {{"consistent", sc.consistent}, {"offset", rep.isConstant() ? "constant" : "sequence"},
                    {"window", sc.window}, {"shifts", sc.shifts}, {"syzygy_degree", sc.syzygyDegree},
                    {"certified", sc.certified}, {"rank_toeplitz", sc.rankToeplitz},
                    {"rank_augmented", sc.rankAugmented}};
                out.holds = sc.consistent;
            }
        } else if (command == "equiv") {
            const ati::AffineKernelRep a = ati::io::kernelFromJson(ati::io::readJsonFile(eqA));
            const ati::AffineKernelRep b = ati::io::kernelFromJson(ati::io::readJsonFile(eqB));
            const bool same = ati::equivalent(a, b);
            out.report = {{"equivalent", same}};
            out.holds = same;
        } else if (command == "syzygy") {
            const ati::PolyMatrix R = ati::io::polyMatrixFromJson(ati::io::readJsonFile(syzFile));
            const ati::PolyMatrix K = ati::syzygyBasis(R);
            out.report = {{"rank", ati::polyRank(R)}, {"generators", K.rows()}, {"basis", ati::io::toJson(K)}};
        } else if (command == "smith") {
            const ati::PolyMatrix R = ati::io::polyMatrixFromJson(ati::io::readJsonFile(smithFile));
            const ati::SmithDecomposition s = ati::smithForm(R);
            json factors = json::array();
            for (const ati::Poly& f : s.factors) {
                json coeffs = json::array();
                for (const ati::Rational& c : f.coefficients()) {
                    coeffs.push_back(ati::formatRational(c));
                }
                factors.push_back(std::move(coeffs));
            }
            out.report = {{"rank", s.rank()}, {"factors", factors}, {"U", ati::io::toJson(s.U)},
                {"V", ati::io::toJson(s.V)}};
        } else if (command == "worked-example") {
            const ati::ScenarioReport r = ati::runWorkedExample(tol);
            out.report = ati::reportJson(r);
            out.table = ati::formatReport(r);
            out.holds = r.allPass();
        }
    } catch (const ati::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (conditionCode(e.code())) {
            std::cout << json {{"error", std::string(ati::toString(e.code()))}, {"message", e.what()}}.dump() << "\n";
            return kExitFailed;
        }
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }

    const bool tableMode = !out.table.empty() && !g.json;
    const std::string text = tableMode ? out.table : out.report.dump(2) + "\n";
    std::cout << text;
    try {
        writeArtifacts(g, command, out);
    } catch (const std::exception& e) {
        std::cerr << "error: cannot write artifacts: " << e.what() << "\n";
        return kExitError;
    }
    return out.holds ? kExitOk : kExitFailed;
}
