/** Fixture-backed test server coordinates, shared by globalSetup and tests. */
export const TEST_PORT = 8798;
export const TEST_BASE = `http://127.0.0.1:${TEST_PORT}`;

export const PLACES_CSV = `Place Name,Place Type,latitude,longitude,Place Address,Phone,Zipcode,Website,Monthly Cost,Is Public,Free Reduced Lunch Pct,Rating
North Ave Station,transit stop,33.72,-84.38,"100 North Ave",,30308,,,,,
East Lake Station,transit stop,33.73,-84.32,"200 East Lake Dr",,30317,,,,,
Hope Elementary,school,33.71,-84.39,"10 Hope St",,30310,,,true,45.5,8
Ridge Academy,school,33.76,-84.33,"20 Ridge Rd",,30317,,,false,12.5,9
Stone Market,Grocery/supermarket,33.77,-84.37,"5 Stone Way",(404) 555-0101,30083,,,,,
Temple Sinai,synagogue,33.76,-84.36,"5645 Dupree Dr",(404) 349-8956,30327,https://sinai.example,,,,
Alpha Court,Real estate,33.721,-84.381,"1 Alpha Way",,30308,https://alpha.example,500,,,
Beta Lofts,Real estate,33.74,-84.31,"2 Beta Blvd",,30317,,1500,,,
Gamma Flats,Real estate,33.79,-84.39,"3 Gamma Rd",,30310,,900,,,
`;

export const BLOCKGROUPS_CSV = `GeoID,Boundary,PctIncomeHousing,MedianIncome,JobsIndex,RetailIndex,CrimeIndex
bg01,33.7 -84.4;33.7 -84.35;33.75 -84.35;33.75 -84.4,0.3,40000.0,10.0,5.0,2.0
bg02,33.7 -84.35;33.7 -84.3;33.75 -84.3;33.75 -84.35,0.45,40000.0,20.0,15.0,
bg03,33.75 -84.4;33.75 -84.35;33.8 -84.35;33.8 -84.4,0.25,144000.0,30.0,25.0,8.0
bg04,33.75 -84.35;33.75 -84.3;33.8 -84.3;33.8 -84.35,0.3,60000.0,40.0,35.0,1.0
`;

export const GEOCODES_CSV = `address,lat,lon
77 new st,33.72,-84.33
`;
