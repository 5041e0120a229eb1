#pragma once

// The sdenet command-line driver as a library, so tests can run commands
// in-process.
//
//   sdenet dual <model> --axis I --order M --N N --t T --out coeffs.csv
//   sdenet fit (<model> | --dual coeffs.csv) --hidden n --N N --out net.json
//   sdenet mc <model> --x0 ... --t T --dt DT --paths P --m M --out moment.csv
//   sdenet train-baseline [<model> | --dual coeffs.csv] --size S --box LO HI --out net.json
//   sdenet eval --pred OPERAND [--ref OPERAND] (--grid | --polar | --line) --out table.csv
//
// Every command also writes <out>.manifest.json.
// Exit codes: 0 success, 1 runtime failure, 2 usage or parse error.

#include <iosfwd>
#include <string>
#include <vector>

namespace sdenet::cli {

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sdenet::cli
