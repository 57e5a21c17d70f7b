# Tests package for the Heavy-tailed MST Lab
