#pragma once

// Published values used as side-by-side references in reproduction reports.
// Each entry is {median error %, standard error}. Columns for external
// classifiers (ROAD, S-ROAD1, S-ROAD2) are quoted only; they are not
// recomputed here.

#include <array>
#include <utility>

namespace hdc::reference {

using Cell = std::pair<double, double>;

inline constexpr std::array<double, 10> kRhoGrid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

// Equal correlation, normal samples, p = 125, n1 = n2 = 250.
struct EqualCorrRow {
  Cell d, road, sroad1, sroad2, nb, oracle, t;
};

inline constexpr std::array<EqualCorrRow, 10> kTable1{{
    {{9.6, 1.55}, {9.4, 2.91}, {11.4, 3.54}, {9.6, 3.24}, {6.6, 1.23}, {5.6, 1.13}, {6.2, 1.18}},
    {{9.2, 1.52}, {8.4, 2.50}, {8.6, 2.58}, {8.4, 2.50}, {12.4, 1.57}, {5.4, 1.12}, {12.4, 1.57}},
    {{8.0, 1.49}, {7.2, 2.39}, {7.4, 2.42}, {7.2, 2.39}, {16.8, 1.77}, {4.4, 1.06}, {16.8, 1.76}},
    {{6.4, 1.37}, {6.0, 1.87}, {6.0, 1.86}, {6.0, 1.87}, {20.2, 1.88}, {3.4, 0.96}, {20.2, 1.87}},
    {{5.0, 1.24}, {4.6, 1.55}, {4.6, 1.55}, {4.6, 1.55}, {22.6, 1.94}, {2.4, 0.82}, {22.6, 1.94}},
    {{3.4, 1.04}, {3.2, 1.02}, {3.2, 1.02}, {3.2, 1.02}, {24.6, 2.00}, {1.6, 0.65}, {24.6, 1.99}},
    {{2.0, 0.79}, {1.8, 0.73}, {1.8, 0.74}, {1.8, 0.73}, {26.2, 2.04}, {0.8, 0.46}, {26.2, 2.03}},
    {{0.8, 0.51}, {0.8, 0.47}, {0.8, 0.47}, {0.8, 0.47}, {27.4, 2.06}, {0.2, 0.26}, {27.4, 2.05}},
    {{0.2, 0.22}, {0.2, 0.20}, {0.2, 0.20}, {0.2, 0.20}, {28.6, 2.08}, {0.0, 0.09}, {28.6, 2.07}},
    {{0.0, 0.02}, {0.0, 0.02}, {0.0, 0.02}, {0.0, 0.02}, {29.6, 2.10}, {0.0, 0.00}, {29.6, 2.10}},
}};

// Equal correlation, standardized Student t(7) samples.
inline constexpr std::array<EqualCorrRow, 10> kTable2{{
    {{12.0, 1.55}, {9.0, 2.76}, {9.0, 2.80}, {9.0, 3.24}, {9.1, 1.29}, {7.8, 1.29}, {8.6, 1.24}},
    {{11.6, 1.56}, {9.8, 3.11}, {15.2, 6.32}, {11.6, 3.61}, {15.2, 4.17}, {7.6, 1.27}, {14.8, 3.40}},
    {{10.4, 1.48}, {8.6, 2.81}, {19.6, 6.76}, {11.4, 3.44}, {19.2, 7.00}, {6.6, 1.23}, {19.0, 5.79}},
    {{9.0, 1.38}, {7.4, 2.36}, {24.0, 7.26}, {10.6, 3.00}, {22.4, 8.83}, {5.6, 1.16}, {22.0, 7.58}},
    {{7.6, 1.27}, {6.0, 1.50}, {27.6, 8.06}, {9.2, 2.73}, {24.8, 10.15}, {4.6, 1.06}, {24.2, 8.99}},
    {{6.0, 1.13}, {4.8, 1.00}, {28.9, 9.35}, {7.8, 2.26}, {27.0, 11.11}, {3.4, 0.91}, {26.2, 10.11}},
    {{4.4, 0.97}, {3.4, 0.84}, {29.2, 10.83}, {6.0, 1.73}, {29.0, 11.90}, {2.4, 0.75}, {27.6, 11.02}},
    {{2.8, 0.78}, {2.0, 0.65}, {29.2, 12.32}, {4.0, 1.26}, {30.6, 12.51}, {1.4, 0.57}, {29.0, 11.79}},
    {{1.2, 0.53}, {0.8, 0.43}, {28.8, 13.74}, {2.0, 0.90}, {32.0, 13.01}, {0.6, 0.36}, {30.2, 12.44}},
    {{0.2, 0.23}, {0.2, 0.20}, {28.6, 15.06}, {0.4, 0.39}, {33.4, 13.35}, {0.0, 0.14}, {31.2, 12.96}},
}};

// Autoregressive correlation, normal samples (no naive Bayes column).
struct AR1Row {
  Cell d, road, sroad1, sroad2, oracle, t;
};

inline constexpr std::array<AR1Row, 10> kTable3{{
    {{9.6, 1.55}, {9.4, 2.91}, {11.6, 3.54}, {9.6, 3.24}, {5.6, 1.13}, {6.2, 1.18}},
    {{11.8, 1.68}, {11.4, 3.42}, {12.8, 3.67}, {11.6, 3.61}, {0.0, 0.09}, {8.0, 1.31}},
    {{14.2, 1.80}, {13.4, 4.27}, {14.4, 4.02}, {13.6, 4.39}, {0.0, 0.15}, {10.0, 1.44}},
    {{16.4, 1.89}, {15.4, 5.48}, {16.0, 4.61}, {15.6, 5.55}, {0.4, 0.33}, {12.2, 1.57}},
    {{18.6, 1.99}, {17.4, 6.78}, {17.8, 5.95}, {17.6, 6.73}, {1.8, 0.64}, {14.8, 1.70}},
    {{20.8, 2.07}, {19.6, 7.54}, {20.0, 7.29}, {19.8, 7.52}, {4.6, 1.02}, {17.8, 1.81}},
    {{22.6, 2.16}, {22.0, 7.53}, {22.6, 7.34}, {22.2, 7.46}, {8.6, 1.38}, {21.4, 1.92}},
    {{23.6, 2.26}, {23.8, 7.71}, {26.0, 7.54}, {24.0, 7.64}, {12.6, 1.71}, {25.0, 2.03}},
    {{22.8, 2.38}, {23.2, 8.14}, {30.6, 7.67}, {23.8, 8.19}, {14.6, 1.94}, {31.0, 2.12}},
    {{17.0, 2.39}, {17.0, 7.31}, {33.4, 9.13}, {18.0, 8.26}, {11.4, 1.93}, {37.0, 2.19}},
}};

// T-criterion, Sigma = I, p = 500, delocalized n0 = 10, n1 = n2 = 100..500.
inline constexpr std::array<int, 9> kTable4Sizes{100, 150, 200, 250, 300, 350, 400, 450, 500};
inline constexpr std::array<Cell, 9> kTable4{{{13.00, 2.52},
                                              {11.00, 1.90},
                                              {9.75, 1.57},
                                              {9.00, 1.35},
                                              {8.50, 1.20},
                                              {8.14, 1.11},
                                              {7.88, 1.01},
                                              {7.56, 0.95},
                                              {7.40, 0.89}}};

// Leukemia data: {training errors, testing errors, genes used}.
struct DatasetRow {
  const char* method;
  int train_errors;
  int test_errors;
  int genes;
};

inline constexpr std::array<DatasetRow, 6> kTable5{{{"T-criterion", 0, 2, 7129},
                                                   {"ROAD", 0, 1, 40},
                                                   {"SCRDA", 1, 2, 264},
                                                   {"FAIR", 1, 1, 11},
                                                   {"NSC", 1, 3, 24},
                                                   {"NB", 0, 5, 7129}}};

}  // namespace hdc::reference
