#pragma once

#include <esn/precision.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace esn::cli {

// One output value.  Numbers keep their 17-significant-digit text so CSV and
// JSON print the same digits.
struct Cell {
    enum class Kind { Number, Text, Bool, Empty };
    Kind kind = Kind::Empty;
    std::string text;

    static Cell number(double v);
    static Cell number(const mp_real& v);
    static Cell integer(long long v);
    static Cell str(std::string s);
    static Cell boolean(bool b);
    static Cell empty() { return {}; }
};

std::string format_number(double v);
std::string format_number(const mp_real& v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// key/value pairs written as a flat JSON object.
using Summary = std::vector<std::pair<std::string, Cell>>;

void write_csv(std::ostream& os, const Table& t);
void write_json_object(std::ostream& os, const Summary& s);
void write_json(std::ostream& os, const Summary& header, const Table& t, const Summary* summary);

} // namespace esn::cli
