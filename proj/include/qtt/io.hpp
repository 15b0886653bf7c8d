#pragma once

#include <string>

#include "qtt/spline.hpp"
#include "qtt/tensor_train.hpp"

namespace qtt {

//! Binary train container: magic "QTT1", u32 core count, then per core
//! u32 (left, mode, right) triples, then little-endian f64 payload in
//! storage order.
void write_tt(const TensorTrain& t, const std::string& path);
TensorTrain read_tt(const std::string& path);

//! Dense dump, one "index,value" row per grid point (guarded by the dense cap).
void write_dense_csv(const TensorTrain& t, const std::string& path);

//! CSV with header: columns x,y (1D) or x,y,value (2D), '.' decimal separator.
DataSet read_dataset_csv(const std::string& path);
void write_dataset_csv(const DataSet& data, const std::string& path);

}  // namespace qtt
