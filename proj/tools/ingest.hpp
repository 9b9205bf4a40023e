#ifndef CPMC_TOOLS_INGEST_HPP
#define CPMC_TOOLS_INGEST_HPP

#include <string>
#include <vector>

namespace cpmc::cli {

// Read one numeric column from a delimited text file (whitespace, comma or
// tab separated). `column` selects by 0-based index ("0", "2", ...) or by
// header name; an empty spec means the first column. A leading header row is
// detected by its selected field failing to parse. Rows with unparseable or
// non-finite values raise DataError naming the 1-based row.
std::vector<double> ingest(const std::string& path, const std::string& column = "");

}  // namespace cpmc::cli

#endif
