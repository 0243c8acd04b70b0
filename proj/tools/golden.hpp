#pragma once

// Reference values used by --compare.

#include <array>

namespace golden {

struct Cell {
    double row;  // strike K (table 1) or penalty p (table 2)
    double k;    // transaction cost
    double bid, ask;
};

inline constexpr std::array<Cell, 10> table1{{
    {100, 0, 10.043290, 11.033942}, {95, 0, 5.266479, 6.817389},   {90, 0, 0.967824, 2.774598},
    {85, 0, -2.934360, -1.091048},  {80, 0, -6.910514, -5.131149}, {100, 0.005, 9.568590, 11.687749},
    {95, 0.005, 4.706543, 7.480028}, {90, 0.005, 0.367975, 3.423798}, {85, 0.005, -3.587214, -0.444708},
    {80, 0.005, -7.584034, -4.614029},
}};

inline constexpr std::array<Cell, 12> table2{{
    {0, 0, 10.000000, 10.000000},      {1, 0, 10.014709, 10.278348},     {2, 0, 10.027095, 10.497310},
    {5, 0, 10.043290, 11.033942},      {10, 0, 10.050958, 11.571315},    {20, 0, 10.052026, 11.796921},
    {0, 0.005, 9.550000, 10.447761},   {1, 0.005, 9.556726, 10.790910},  {2, 0.005, 9.562075, 11.051351},
    {5, 0.005, 9.568590, 11.687749},   {10, 0.005, 9.571850, 12.297913}, {20, 0.005, 9.572414, 12.575621},
}};

inline constexpr std::array<Cell, 2> american{{
    {100, 0, 10.052027, 11.812658},
    {100, 0.005, 9.572414, 12.589930},
}};

// Two-step example: prices in currencies 1 and 2, as exact strings.
inline constexpr const char* example1_ask[] = {"2/5", "4"};
inline constexpr const char* example1_bid[] = {"11/50", "11/5"};
// One-step counterexample: ask in currency 1 and the untruncated dual value.
inline constexpr const char* example2_ask = "-2";
inline constexpr const char* example2_kifer = "-3";

// Copies of data/example*.json.
inline constexpr const char* example1_model = R"({
  "currencies": 2,
  "mode": "lattice",
  "nodes": [
    {"id": "root", "time": 0, "successors": ["u", "d"], "rates": [["1", "1/10"], ["10", "1"]]},
    {"id": "u", "time": 1, "successors": ["uu", "ud"], "rates": [["1", "1/8"], ["16", "1"]]},
    {"id": "d", "time": 1, "successors": ["ud", "dd"], "rates": [["1", "1/6"], ["6", "1"]]},
    {"id": "uu", "time": 2, "rates": [["1", "1/16"], ["16", "1"]]},
    {"id": "ud", "time": 2, "rates": [["1", "1/10"], ["10", "1"]]},
    {"id": "dd", "time": 2, "rates": [["1", "1/4"], ["4", "1"]]}
  ]
})";

inline constexpr const char* example1_option = R"({
  "type": "explicit",
  "payoffs": {
    "root": {"Y": ["0", "0"], "X": ["0", "5"], "Xprime": ["0", "5/2"]},
    "u": {"Y": ["0", "3"], "X": ["0", "4"], "Xprime": ["0", "7/2"]},
    "d": {"Y": ["0", "0"], "X": ["0", "1"], "Xprime": ["0", "1/2"]},
    "uu": {"Y": ["0", "9"], "X": ["0", "9"], "Xprime": ["0", "9"]},
    "ud": {"Y": ["0", "4"], "X": ["0", "4"], "Xprime": ["0", "4"]},
    "dd": {"Y": ["0", "0"], "X": ["0", "0"], "Xprime": ["0", "0"]}
  }
})";

inline constexpr const char* example2_model = R"({
  "currencies": 2,
  "mode": "tree",
  "nodes": [
    {"id": "root", "time": 0, "successors": ["u", "d"], "rates": [["1", "13"], ["1/10", "1"]]},
    {"id": "u", "time": 1, "rates": [["1", "12"], ["1/12", "1"]]},
    {"id": "d", "time": 1, "rates": [["1", "9"], ["1/9", "1"]]}
  ]
})";

inline constexpr const char* example2_option = R"({
  "type": "explicit",
  "payoffs": {
    "root": {"Y": ["-20", "1"], "X": ["-15", "1"], "Xprime": ["-20", "1"]},
    "u": {"Y": ["0", "0"], "X": ["0", "0"], "Xprime": ["0", "0"]},
    "d": {"Y": ["0", "0"], "X": ["0", "0"], "Xprime": ["0", "0"]}
  }
})";

}  // namespace golden
