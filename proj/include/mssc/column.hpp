#pragma once

#include "mssc/instance.hpp"
#include "mssc/point_set.hpp"

namespace mssc {

// A candidate cluster of the set-partitioning formulation.
struct Column {
    PointSet members;
    double cost = 0.0;
    Point centroid;

    static Column make(const Instance& instance, PointSet members) {
        const auto cc = cluster_cost(instance, members);
        return Column{std::move(members), cc.cost, cc.centroid};
    }
};

struct PricedColumn {
    Column column;
    double reduced_cost = 0.0;
};

}  // namespace mssc
