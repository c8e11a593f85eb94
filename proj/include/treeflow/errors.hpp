#pragma once

#include <stdexcept>
#include <string>

namespace treeflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define TREEFLOW_ERROR(Name)                         \
    struct Name : Error {                            \
        explicit Name(const std::string& msg = #Name) : Error(msg) {} \
    }

TREEFLOW_ERROR(Infeasible);
TREEFLOW_ERROR(NotCirculation);
TREEFLOW_ERROR(AllInfinite);
TREEFLOW_ERROR(TooLarge);
TREEFLOW_ERROR(NotRepresentable);
TREEFLOW_ERROR(NotLConvex);
TREEFLOW_ERROR(EmptyDomain);
TREEFLOW_ERROR(NotMultifacility);
TREEFLOW_ERROR(CapacityViolated);
TREEFLOW_ERROR(CostNotPositive);
TREEFLOW_ERROR(NotOptimalPair);
TREEFLOW_ERROR(InvalidInput);

#undef TREEFLOW_ERROR

}  // namespace treeflow
