package test.dit;

public class ClassE extends ClassC {
}
