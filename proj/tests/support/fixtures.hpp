#pragma once

// Small MS MARCO-style passage fixtures shared across suites. The predicted
// queries deliberately mix tokens copied from the passage with tokens that
// never occur in it.

namespace fixtures {

inline constexpr const char* kWeatherPassage =
    "July is the hottest month in Washington DC with an average temperature "
    "of 27\xC2\xB0"
    "C (80\xC2\xB0"
    "F) and the coldest is January at 4\xC2\xB0"
    "C (38\xC2\xB0"
    "F) with the most daily sunshine hours at 9 in July. The wettest month "
    "is May with an average of 100mm of rain.";
inline constexpr const char* kWeatherPredicted = "weather in washington dc";

inline constexpr const char* kRiverPassage =
    "The Delaware River flows through Philadelphia into the Delaware Bay. It "
    "flows through and aqueduct in the Roundout Reservoir and then flows "
    "through Philadelphia and New Jersey before emptying into the Delaware "
    "Bay.";
inline constexpr const char* kRiverPredicted = "what river flows through delaware";

inline constexpr const char* kChromosomePassage =
    "sex chromosome - (genetics) a chromosome that determines the sex of an "
    "individual; mammals normally have two sex chromosomes chromosome - a "
    "threadlike strand of DNA in the cell nucleus that carries the genes in "
    "a linear order; humans have 22 chromosome pairs plus two sex "
    "chromosomes.";
inline constexpr const char* kChromosomePredicted =
    "what is the relationship between genes and chromosomes";

} // namespace fixtures
