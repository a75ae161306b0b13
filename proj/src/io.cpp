#include "ati/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ati::io {

namespace {

std::ifstream openInput(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    }
    return in;
}

std::vector<std::string> splitCsv(const std::string& line)
{
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    return cells;
}

double parseNumber(const std::string& s, int line)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": '" + s + "' is not a number");
    }
}

struct CsvTable {
    std::vector<std::string> header;
    Matrix data;
};

CsvTable readCsvTable(std::istream& in)
{
    std::string line;
    int lineNo = 0;
    CsvTable table;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            break;
        }
    }
    table.header = splitCsv(line);
    if (table.header.size() < 2 || table.header.front() != "t") {
        throw Error(ErrorCode::ParseError, "CSV header must start with 't' followed by at least one column");
    }
    std::vector<std::vector<double>> rows;
    const std::size_t width = table.header.size();
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto cells = splitCsv(line);
        if (cells.size() != width) {
            throw Error(ErrorCode::ParseError,
                "line " + std::to_string(lineNo) + ": expected " + std::to_string(width) + " fields");
        }
        const double t = parseNumber(cells[0], lineNo);
        if (t != static_cast<double>(rows.size() + 1)) {
            throw Error(ErrorCode::ParseError,
                "line " + std::to_string(lineNo) + ": time stamps must run 1, 2, 3, ...");
        }
        std::vector<double> row;
        for (std::size_t k = 1; k < width; ++k) {
            row.push_back(parseNumber(cells[k], lineNo));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw Error(ErrorCode::EmptyTrajectory, "CSV has no samples");
    }
    table.data.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width - 1));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k + 1 < width; ++k) {
            table.data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
        }
    }
    return table;
}

} // namespace

TrajectoryDescriptor readDescriptor(const std::string& path)
{
    const json j = readJsonFile(path);
    TrajectoryDescriptor d;
    d.m = j.at("m").get<int>();
    if (j.contains("labels")) {
        d.labels = j.at("labels").get<std::vector<std::string>>();
    }
    return d;
}

Trajectory readTrajectoryCsv(std::istream& in, int m)
{
    CsvTable table = readCsvTable(in);
    std::vector<std::string> labels(table.header.begin() + 1, table.header.end());
    return Trajectory(std::move(table.data), m, std::move(labels));
}

Trajectory readTrajectoryCsv(const std::string& path, int m)
{
    auto in = openInput(path);
    return readTrajectoryCsv(in, m);
}

Matrix readMatrixCsv(const std::string& path)
{
    auto in = openInput(path);
    return readCsvTable(in).data;
}

void writeTrajectoryCsv(std::ostream& out, const Matrix& data, const std::vector<std::string>& labels)
{
    out << "t";
    for (Eigen::Index k = 0; k < data.cols(); ++k) {
        out << ","
            << (static_cast<std::size_t>(k) < labels.size() ? labels[static_cast<std::size_t>(k)]
                                                            : "w" + std::to_string(k + 1));
    }
    out << "\n";
    char buf[64];
    for (Eigen::Index t = 0; t < data.rows(); ++t) {
        out << (t + 1);
        for (Eigen::Index k = 0; k < data.cols(); ++k) {
            const auto res = std::to_chars(buf, buf + sizeof buf, data(t, k));
            out << "," << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
        }
        out << "\n";
    }
}

double round12(double v)
{
    if (!std::isfinite(v) || v == 0.0) {
        return v == 0.0 ? 0.0 : v;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

json toJson(const Matrix& M)
{
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            row.push_back(round12(M(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json toJson(const Vector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(round12(v(i)));
    }
    return out;
}

json toJson(const std::vector<double>& v)
{
    json out = json::array();
    for (double x : v) {
        out.push_back(round12(x));
    }
    return out;
}

Matrix matrixFromJson(const json& j)
{
    if (!j.is_array()) {
        throw Error(ErrorCode::ParseError, "matrix must be an array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw Error(ErrorCode::ParseError, "ragged matrix rows");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            M(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
        }
    }
    return M;
}

Vector vectorFromJson(const json& j)
{
    if (!j.is_array()) {
        throw Error(ErrorCode::ParseError, "vector must be an array");
    }
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
    }
    return v;
}

AffineStateSpace systemFromJson(const json& j)
{
    try {
        Matrix A = matrixFromJson(j.value("A", json::array()));
        Matrix B = matrixFromJson(j.value("B", json::array()));
        Matrix C = matrixFromJson(j.value("C", json::array()));
        Matrix D = matrixFromJson(j.value("D", json::array()));
        const int n = static_cast<int>(A.rows());
        int m = j.contains("m") ? j.at("m").get<int>()
                                : static_cast<int>(n > 0 ? B.cols() : D.cols());
        int p = j.contains("p") ? j.at("p").get<int>() : static_cast<int>(j.contains("F") ? j.at("F").size() : C.rows());
        if (p == 0) {
            p = static_cast<int>(D.rows());
        }
        // Empty blocks carry no shape information; rebuild them from (n, m, p).
        if (B.size() == 0) {
            B.resize(n, m);
        }
        if (C.size() == 0) {
            C.resize(p, n);
        }
        if (D.size() == 0) {
            D = Matrix::Zero(p, m);
        }
        Vector E = j.contains("E") ? vectorFromJson(j.at("E")) : Vector::Zero(n);
        Vector F = j.contains("F") ? vectorFromJson(j.at("F")) : Vector::Zero(p);
        return AffineStateSpace(A, B, C, D, E, F);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("system JSON: ") + e.what());
    }
}

json toJson(const AffineStateSpace& sys)
{
    return json {{"n", sys.n()}, {"m", sys.m()}, {"p", sys.p()}, {"A", toJson(sys.A)}, {"B", toJson(sys.B)},
        {"C", toJson(sys.C)}, {"D", toJson(sys.D)}, {"E", toJson(sys.E)}, {"F", toJson(sys.F)}};
}

json toJson(const LiftedStateSpace& sys)
{
    return json {{"n", sys.n()}, {"A", toJson(sys.A)}, {"B", toJson(sys.B)}, {"C", toJson(sys.C)},
        {"D", toJson(sys.D)}};
}

Expr exprFromJson(const json& j)
{
    if (j.is_string()) {
        return Expr::parse(j.get<std::string>());
    }
    if (j.is_number()) {
        return Expr::constant(j.get<double>());
    }
    if (!j.is_object()) {
        throw Error(ErrorCode::ParseError, "expression must be a string, number or object");
    }
    if (j.contains("const")) {
        return Expr::constant(j.at("const").get<double>());
    }
    if (j.contains("var")) {
        const Expr e = Expr::parse(j.at("var").get<std::string>());
        if (e.kind() != Expr::Kind::State && e.kind() != Expr::Kind::Input) {
            throw Error(ErrorCode::ParseError, "'var' must name x<i> or u<i>");
        }
        return e;
    }
    const std::string op = j.at("op").get<std::string>();
    const json& args = j.at("args");
    auto arg = [&](std::size_t i) { return exprFromJson(args.at(i)); };
    auto need = [&](std::size_t count) {
        if (args.size() != count) {
            throw Error(ErrorCode::ParseError, "'" + op + "' takes " + std::to_string(count) + " arguments");
        }
    };
    if (op == "add" || op == "mul") {
        if (args.empty()) {
            throw Error(ErrorCode::ParseError, "'" + op + "' needs arguments");
        }
        Expr acc = arg(0);
        for (std::size_t i = 1; i < args.size(); ++i) {
            acc = op == "add" ? acc + arg(i) : acc * arg(i);
        }
        return acc;
    }
    if (op == "sub") {
        need(2);
        return arg(0) - arg(1);
    }
    if (op == "neg") {
        need(1);
        return -arg(0);
    }
    if (op == "pow") {
        need(1);
        return Expr::pow(arg(0), j.at("exponent").get<int>());
    }
    throw Error(ErrorCode::ParseError, "unknown operator '" + op + "'");
}

json toJson(const Expr& e)
{
    switch (e.kind()) {
    case Expr::Kind::Constant: return json {{"const", e.constantValue()}};
    case Expr::Kind::State: return json {{"var", "x" + std::to_string(e.index())}};
    case Expr::Kind::Input: return json {{"var", "u" + std::to_string(e.index())}};
    case Expr::Kind::Add: return json {{"op", "add"}, {"args", {toJson(e.children()[0]), toJson(e.children()[1])}}};
    case Expr::Kind::Sub: return json {{"op", "sub"}, {"args", {toJson(e.children()[0]), toJson(e.children()[1])}}};
    case Expr::Kind::Mul: return json {{"op", "mul"}, {"args", {toJson(e.children()[0]), toJson(e.children()[1])}}};
    case Expr::Kind::Neg: return json {{"op", "neg"}, {"args", {toJson(e.children()[0])}}};
    case Expr::Kind::Pow:
        return json {{"op", "pow"}, {"args", {toJson(e.children()[0])}}, {"exponent", e.exponent()}};
    }
    return nullptr;
}

NonlinearPlant plantFromJson(const json& j)
{
    try {
        NonlinearPlant plant;
        for (const json& e : j.at("f")) {
            plant.f.push_back(exprFromJson(e));
        }
        for (const json& e : j.at("h")) {
            plant.h.push_back(exprFromJson(e));
        }
        plant.n = j.value("n", static_cast<int>(plant.f.size()));
        plant.m = j.at("m").get<int>();
        plant.validate();
        return plant;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("plant JSON: ") + e.what());
    }
}

Rational rationalFromJson(const json& j)
{
    if (j.is_string()) {
        return parseRational(j.get<std::string>());
    }
    if (j.is_number_integer()) {
        return Rational(j.get<long>());
    }
    if (j.is_number()) {
        return fromDouble(j.get<double>());
    }
    throw Error(ErrorCode::ParseError, "rational must be a \"num/den\" string or a number");
}

PolyMatrix polyMatrixFromJson(const json& j)
{
    try {
        const int g = j.at("rows").get<int>();
        const int q = j.at("cols").get<int>();
        const json& entries = j.at("entries");
        if (static_cast<int>(entries.size()) != g) {
            throw Error(ErrorCode::ParseError, "entries has the wrong number of rows");
        }
        PolyMatrix R(g, q);
        for (int i = 0; i < g; ++i) {
            const json& row = entries.at(static_cast<std::size_t>(i));
            if (static_cast<int>(row.size()) != q) {
                throw Error(ErrorCode::ParseError, "entries row " + std::to_string(i) + " has the wrong length");
            }
            for (int k = 0; k < q; ++k) {
                std::vector<Rational> coeffs;
                for (const json& c : row.at(static_cast<std::size_t>(k))) {
                    coeffs.push_back(rationalFromJson(c));
                }
                R(i, k) = Poly(std::move(coeffs));
            }
        }
        return R;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("polynomial matrix JSON: ") + e.what());
    }
}

json toJson(const PolyMatrix& R)
{
    json entries = json::array();
    for (int i = 0; i < R.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < R.cols(); ++k) {
            json coeffs = json::array();
            for (const Rational& c : R(i, k).coefficients()) {
                coeffs.push_back(formatRational(c));
            }
            row.push_back(std::move(coeffs));
        }
        entries.push_back(std::move(row));
    }
    return json {{"rows", R.rows()}, {"cols", R.cols()}, {"entries", std::move(entries)}};
}

AffineKernelRep kernelFromJson(const json& j)
{
    AffineKernelRep rep;
    rep.R = polyMatrixFromJson(j);
    try {
        if (j.contains("c_sequence")) {
            for (const json& sample : j.at("c_sequence")) {
                RationalVector v;
                for (const json& c : sample) {
                    v.push_back(rationalFromJson(c));
                }
                rep.sequence.push_back(std::move(v));
            }
            if (rep.sequence.empty()) {
                throw Error(ErrorCode::ParseError, "c_sequence must hold at least one sample");
            }
        } else if (j.contains("c")) {
            for (const json& c : j.at("c")) {
                rep.c.push_back(rationalFromJson(c));
            }
        } else {
            rep.c.assign(static_cast<std::size_t>(rep.R.rows()), Rational(0));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("kernel JSON: ") + e.what());
    }
    rep.validate();
    return rep;
}

json toJson(const AffineKernelRep& rep)
{
    json out = toJson(rep.R);
    if (rep.isConstant()) {
        json c = json::array();
        for (const Rational& v : rep.c) {
            c.push_back(formatRational(v));
        }
        out["c"] = std::move(c);
    } else {
        json seq = json::array();
        for (const RationalVector& s : rep.sequence) {
            json sample = json::array();
            for (const Rational& v : s) {
                sample.push_back(formatRational(v));
            }
            seq.push_back(std::move(sample));
        }
        out["c_sequence"] = std::move(seq);
    }
    return out;
}

json readJsonFile(const std::string& path)
{
    auto in = openInput(path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, "'" + path + "': " + e.what());
    }
}

} // namespace ati::io
