#include "aiaudit/catalog.hpp"

namespace aiaudit {

namespace {

Catalog make_default_catalog() {
    std::vector<BusinessKind> businesses{
        {1, "Home security system that uses facial recognition to identify the person at your door",
         {5, 8, 10, 11, 13}},
        {2, "Crime prediction tool that can predict future crimes one week in advance with about 90% accuracy",
         {7, 8, 10, 11}},
        {3, "Personalized advertisement technology on websites people browse", {5, 6}},
        {4, "Hiring algorithms that automate hiring in big companies to reduce the time taken to go "
            "through thousands of resumes",
         {3, 7, 8, 12}},
        {5, "College admissions automator that decides who should be admitted based on different "
            "aspects in their application",
         {7, 8, 12}},
        {6, "Self-driving cars", {7, 8, 10}},
        {7, "Conversational agents", {2, 3, 4, 5, 6}},
        {8, "Language translation algorithm", {2, 7, 8}},
        {9, "Medical imaging to detect skin cancer from face images", {7, 8, 13}},
        {10, "Recommender system for social media apps that personalizes your homepage's feed",
         {1, 2, 3, 4, 5, 6}},
        {11, "Generative AI Art magazine", {2, 7, 8, 11}},
        {12, "Face filters people can use to apply different styles to their face", {1, 8}},
        {13, "Social interactive robot", {1, 5, 6, 13}},
        {14, "Personalizing search engine results to give you results specific to your past searches",
         {1, 2, 3}},
    };

    // Colors avoid near neighbours (no pink next to red); every harm also gets
    // its own shape so badges stay distinguishable without color.
    std::vector<HarmKind> harms{
        {1, "Increased mental health challenges like depression, body dysmorphia, eating disorders",
         "red", "circle"},
        {2, "Spreading misinformation", "orange", "square"},
        {3, "Forming filter bubbles that isolate unique opinions from one another", "yellow",
         "triangle"},
        {4, "Encouraging hateful behavior and hate groups", "green", "diamond"},
        {5, "Leaking your personal details to other parties", "blue", "pentagon"},
        {6, "Manipulating people's buying behaviors", "purple", "hexagon"},
        {7, "Taking over existing human jobs", "brown", "octagon"},
        {8, "Algorithmic bias discriminating people based on their race, gender, ethnicity, or occupation",
         "black", "star"},
        {9, "Misdiagnosing a patient's illness", "gray", "cross"},
        {10, "Over-Policing neighborhoods", "teal", "arrow"},
        {11, "Leading to wrongful arrests of people", "navy", "crescent"},
        {12, "Marginalizing populations already under-represented in the workforce", "magenta",
         "heart"},
        {13, "Overly placing trust in imperfect technology", "olive", "trapezoid"},
    };

    std::vector<FeatureKind> features{
        {1, "Making the underlying AI technology and data usage transparent and explainable to users",
         {1, 2, 3, 5, 6, 9, 13}},
        {2, "End to end encryption of data collected", {5}},
        {3, "Collecting a balanced, diverse and large dataset to train the AI technology to reduce "
            "algorithmic bias",
         {3, 8, 11}},
        {4, "Enabling people to control the degree of automation in their tools", {3, 6, 9, 10, 13}},
        {5, "Employing a diverse team to develop this technology to gain diverse perspectives and "
            "address diverse needs",
         {1, 4, 7, 12}},
        {6, "Including all affected populations of the technology in the design of the system",
         {1, 7, 12}},
        {7, "Decision making by AI technologies to be examined by humans in the loop", {2, 7, 8, 9, 13}},
    };

    std::vector<GuideEntry> guide{
        {4, 8,
         "Resume sorters often make use of historical data with demographic information to make "
         "decisions about new data. This historical data might often have algorithmic biases, or "
         "might prefer candidates based on their race, gender, economic status or even their name. "
         "A recent study found that hiring algorithms are more likely to select applicants with "
         "common white names like Emily or Greg, versus distinctively Black names like Jamal or "
         "Lakisha."},
        {4, 7,
         "Replacing a human recruiter with an automated hiring system may be time efficient, but "
         "what happens to the human recruiter's job? Is it now redundant? According to a recent "
         "survey, companies are increasingly adopting AI powered screening tools for the first "
         "round of resume sorting, dramatically altering human recruiters' jobs."},
    };

    return Catalog(std::move(businesses), std::move(harms), std::move(features), std::move(guide));
}

}  // namespace

const Catalog& default_catalog() {
    static const Catalog catalog = make_default_catalog();
    return catalog;
}

}  // namespace aiaudit
