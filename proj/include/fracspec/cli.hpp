#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracspec/process.hpp"

namespace fracspec::cli {

enum class Command { Constants, Eigs, Asym, Compare, Eigenfunction, Filtering };
enum class Output { Csv, Json };

struct RunConfig {
    Command command = Command::Constants;
    ProcessSpec process;
    int L = 2000;
    int n_max = 10;
    int n = 5;
    int x_grid = 201;
    Output output = Output::Csv;
    std::optional<std::string> out_path;
    double tol = 1e-10;
    double mu = 1.0;
    double horizon = 1.0;
    std::vector<double> eps{1e-4, 1e-6, 1e-8, 1e-10};
    std::string mode = "endpoint";
    double x = 0.5;
    std::optional<int> n_terms;

    // Throws DomainError on any violated limit.
    void validate() const;
};

struct Cell {
    std::string text;
    bool numeric;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

// 10 significant digits, scientific below 1e-4.
std::string format_number(double v);

Table execute(const RunConfig& config);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

// args excludes the program name. Exit codes: 0 ok, 1 numerical failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace fracspec::cli
